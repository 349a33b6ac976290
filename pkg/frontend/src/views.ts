/** Small DOM builders shared by the wizard pages. */

type Attrs = Record<string, string | boolean | number | undefined>;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  children: Array<Node | string> = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    if (value === undefined || value === false) {
      continue;
    }
    if (name === "text") {
      node.textContent = String(value);
    } else if (value === true) {
      node.setAttribute(name, "");
    } else {
      node.setAttribute(name, String(value));
    }
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function chipButton(
  text: string,
  options: { id: string; pressed: boolean },
): HTMLButtonElement {
  return el(
    "button",
    {
      type: "button",
      id: options.id,
      class: "chip",
      "aria-pressed": options.pressed ? "true" : "false",
    },
    [text],
  );
}

export function controlButton(
  label: string,
  options: { id: string; primary?: boolean; disabled?: boolean } = { id: "" },
): HTMLButtonElement {
  return el(
    "button",
    {
      type: "button",
      id: options.id || undefined,
      class: options.primary ? "control primary" : "control",
      disabled: options.disabled,
    },
    [label],
  );
}

/** Arrow-key focus movement inside a group of buttons. */
export function wireArrowKeys(group: HTMLElement): void {
  group.addEventListener("keydown", (event) => {
    const key = (event as KeyboardEvent).key;
    const forward = key === "ArrowRight" || key === "ArrowDown";
    const backward = key === "ArrowLeft" || key === "ArrowUp";
    if (!forward && !backward) {
      return;
    }
    const buttons = Array.from(
      group.querySelectorAll<HTMLButtonElement>("button:not([disabled])"),
    );
    const active = document.activeElement;
    const index = buttons.findIndex((button) => button === active);
    if (index === -1 || buttons.length === 0) {
      return;
    }
    event.preventDefault();
    const next = (index + (forward ? 1 : -1) + buttons.length) % buttons.length;
    buttons[next].focus();
  });
}
