import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { expect, test } from "vitest";
import { contrastRatio, palette, textPairs } from "../src/palette.js";
import {
  GOLDEN_SCENE,
  buttonByText,
  byId,
  mountApp,
  runAxe,
} from "./helpers.js";

async function expectNoViolations(pageName: string): Promise<void> {
  const results = await runAxe();
  const critical = results.violations.filter((v) => v.impact === "critical");
  expect(
    critical,
    `critical a11y violations on ${pageName}: ${critical.map((v) => v.id).join(", ")}`,
  ).toEqual([]);
  expect(
    results.violations,
    `a11y violations on ${pageName}: ${results.violations.map((v) => v.id).join(", ")}`,
  ).toEqual([]);
}

test("every step page passes the automated accessibility audit", async () => {
  const { app } = await mountApp();

  await expectNoViolations("environment");

  buttonByText("park").click();
  await app.whenIdle();
  buttonByText("Next").click();
  await app.whenIdle();
  await expectNoViolations("subjects");

  buttonByText("tree").click();
  buttonByText("bench").click();
  buttonByText("Next").click();
  await app.whenIdle();
  await expectNoViolations("actions");

  buttonByText("Skip").click();
  await app.whenIdle();
  await expectNoViolations("scene");

  buttonByText(GOLDEN_SCENE).click();
  await app.whenIdle();
  buttonByText("green").click();
  await app.whenIdle();
  expect(byId("syn-menu")).toBeTruthy();
  await expectNoViolations("scene with replacement menu");

  buttonByText("Close").click();
  buttonByText("Next").click();
  await app.whenIdle();
  await expectNoViolations("style");

  buttonByText("oil painting").click();
  buttonByText("Next").click();
  await app.whenIdle();
  await expectNoViolations("finished prompt");
});

test("every text color pairing meets the 4.5:1 contrast floor", () => {
  for (const [foreground, background] of textPairs) {
    const ratio = contrastRatio(palette[foreground], palette[background]);
    expect(
      ratio,
      `${foreground} on ${background} is ${ratio.toFixed(2)}:1`,
    ).toBeGreaterThanOrEqual(4.5);
  }
});

test("the stylesheet takes every color from an audited palette token", () => {
  const here = dirname(fileURLToPath(import.meta.url));
  const css = readFileSync(join(here, "..", "styles.css"), "utf8");
  const declarations = css.matchAll(
    /(?:^|[;{])\s*(color|background(?:-color)?|border(?!-radius)[a-z-]*|outline)\s*:\s*([^;}]+)/g,
  );
  let audited = 0;
  for (const [, property, value] of declarations) {
    expect(
      value,
      `"${property}: ${value.trim()}" must reference a --pw-* token`,
    ).toMatch(/var\(--pw-|transparent|inherit|currentColor|none/);
    audited += 1;
  }
  expect(audited).toBeGreaterThan(10);
});
