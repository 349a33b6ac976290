/** Color tokens and the WCAG contrast math used to audit them.
 *
 * Every color in the stylesheet is a var(--pw-*) reference resolved from
 * this table, so the contrast test measures the palette the app renders.
 */

export const palette = {
  surface: "#ffffff",
  panel: "#f4f7f9",
  status: "#e8f2fa",
  ink: "#1b1b1b",
  muted: "#565656",
  accent: "#005ea2",
  accentInk: "#ffffff",
  danger: "#b50909",
  border: "#565656",
  focus: "#2491ff",
  disabledBg: "#e6e6e6",
} as const;

export type PaletteToken = keyof typeof palette;

/** Every foreground/background pairing that renders text. */
export const textPairs: ReadonlyArray<[PaletteToken, PaletteToken]> = [
  ["ink", "surface"],
  ["muted", "surface"],
  ["accent", "surface"],
  ["danger", "surface"],
  ["ink", "panel"],
  ["muted", "panel"],
  ["accent", "panel"],
  ["ink", "status"],
  ["accentInk", "accent"],
  ["muted", "disabledBg"],
];

function channel(value: number): number {
  const scaled = value / 255;
  return scaled <= 0.04045 ? scaled / 12.92 : ((scaled + 0.055) / 1.055) ** 2.4;
}

export function relativeLuminance(hex: string): number {
  const match = /^#([0-9a-f]{6})$/i.exec(hex);
  if (!match) {
    throw new Error(`Not a 6-digit hex color: ${hex}`);
  }
  const value = parseInt(match[1], 16);
  const r = channel((value >> 16) & 0xff);
  const g = channel((value >> 8) & 0xff);
  const b = channel(value & 0xff);
  return 0.2126 * r + 0.7152 * g + 0.0722 * b;
}

export function contrastRatio(foreground: string, background: string): number {
  const a = relativeLuminance(foreground);
  const b = relativeLuminance(background);
  const [hi, lo] = a >= b ? [a, b] : [b, a];
  return (hi + 0.05) / (lo + 0.05);
}

/** Install the palette as CSS custom properties on the document root. */
export function applyPalette(root: HTMLElement): void {
  for (const [token, value] of Object.entries(palette)) {
    root.style.setProperty(`--pw-${token}`, value);
  }
}
