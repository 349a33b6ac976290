/** Shared drivers: mounting the app against the live API, a keyboard model
 * that mirrors how a browser moves focus and activates buttons, and an
 * axe-core runner for the step pages. */

import axe from "axe-core";
import { inject } from "vitest";
import type { ClipboardLike } from "../src/app.js";
import { PromptWizard } from "../src/app.js";
import type { FetchLike } from "../src/api.js";

export const GOLDEN_SCENE =
  "A young man is sitting on a bench near a small tree. He is wearing a green pullover";
export const GOLDEN_PROMPT = `${GOLDEN_SCENE}, oil painting`;

export function apiBase(): string {
  return inject("baseUrl");
}

export interface CapturedClipboard extends ClipboardLike {
  text: string | null;
}

export interface Mounted {
  app: PromptWizard;
  root: HTMLElement;
  clipboard: CapturedClipboard;
}

export async function mountApp(
  options: { clipboard?: ClipboardLike | null; fetchImpl?: FetchLike } = {},
): Promise<Mounted> {
  document.documentElement.lang = "en";
  document.title = "Prompt Builder";
  document.body.replaceChildren();

  const captured: CapturedClipboard = {
    text: null,
    async writeText(text: string) {
      captured.text = text;
    },
  };
  const root = document.createElement("div");
  root.id = "app";
  document.body.append(root);

  const app = new PromptWizard({
    root,
    baseUrl: apiBase(),
    clipboard: options.clipboard !== undefined ? options.clipboard : captured,
    fetchImpl: options.fetchImpl,
  });
  await app.start();
  await app.whenIdle();
  return { app, root, clipboard: captured };
}

export function byId<T extends HTMLElement = HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`#${id} is not on the page`);
  }
  return node as T;
}

export function buttonByText(label: string): HTMLButtonElement {
  const buttons = Array.from(document.querySelectorAll("button"));
  const hit = buttons.find((button) => (button.textContent ?? "").trim() === label);
  if (!hit) {
    throw new Error(`no button labeled "${label}"`);
  }
  return hit;
}

// -- keyboard model -----------------------------------------------------------

export function tabbables(): HTMLElement[] {
  const selector = "a[href], button, input, select, textarea, [tabindex]";
  return Array.from(document.querySelectorAll<HTMLElement>(selector)).filter(
    (node) =>
      !node.hasAttribute("disabled") &&
      node.tabIndex >= 0 &&
      !node.closest("[hidden]"),
  );
}

export function pressTab(shift = false): HTMLElement {
  const order = tabbables();
  if (order.length === 0) {
    throw new Error("nothing is focusable");
  }
  const active = document.activeElement;
  const index = order.findIndex((node) => node === active);
  const next =
    index === -1
      ? shift
        ? order.length - 1
        : 0
      : (index + (shift ? -1 : 1) + order.length) % order.length;
  active?.dispatchEvent(
    new KeyboardEvent("keydown", {
      key: "Tab",
      shiftKey: shift,
      bubbles: true,
      cancelable: true,
    }),
  );
  const target = order[next];
  target.focus();
  return target;
}

/** Dispatch a key to the focused element, then emulate the browser default
 * (Enter/Space activate buttons) unless the app prevented it. */
export function press(key: string): void {
  const target = (document.activeElement ?? document.body) as HTMLElement;
  const keydown = new KeyboardEvent("keydown", {
    key,
    bubbles: true,
    cancelable: true,
  });
  const proceed = target.dispatchEvent(keydown);
  if (proceed && (key === "Enter" || key === " ") && target instanceof HTMLButtonElement) {
    target.click();
  }
  target.dispatchEvent(new KeyboardEvent("keyup", { key, bubbles: true }));
}

/** Tab forward until the focused control matches the label. */
export function tabTo(label: string): HTMLElement {
  const limit = tabbables().length + 2;
  for (let i = 0; i < limit; i += 1) {
    const focused = pressTab();
    const name = focused.getAttribute("aria-label") ?? focused.textContent ?? "";
    if (name.trim() === label) {
      return focused;
    }
  }
  throw new Error(`no tab stop matched "${label}"`);
}

/** Keydown-per-character typing that keeps the field's value in sync. */
export function typeText(
  field: HTMLInputElement | HTMLTextAreaElement,
  text: string,
): void {
  field.focus();
  for (const ch of text) {
    field.dispatchEvent(
      new KeyboardEvent("keydown", { key: ch, bubbles: true, cancelable: true }),
    );
    field.value += ch;
    field.dispatchEvent(new Event("input", { bubbles: true }));
    field.dispatchEvent(new KeyboardEvent("keyup", { key: ch, bubbles: true }));
  }
}

// -- pointer walkthrough (shared by several suites) ----------------------------

export async function clickThroughWalkthrough(app: PromptWizard): Promise<void> {
  buttonByText("park").click();
  await app.whenIdle();
  buttonByText("Next").click();
  await app.whenIdle();

  buttonByText("tree").click();
  buttonByText("bench").click();
  buttonByText("Next").click();
  await app.whenIdle();

  buttonByText("Skip").click();
  await app.whenIdle();

  buttonByText(GOLDEN_SCENE).click();
  await app.whenIdle();
  buttonByText("Next").click();
  await app.whenIdle();

  buttonByText("oil painting").click();
  buttonByText("Next").click();
  await app.whenIdle();
}

// -- accessibility -------------------------------------------------------------

export async function runAxe(): Promise<axe.AxeResults> {
  // Color contrast needs a layout engine; it is audited from the palette
  // tokens instead (see a11y.test.ts).
  return axe.run(document, {
    rules: { "color-contrast": { enabled: false } },
  });
}
