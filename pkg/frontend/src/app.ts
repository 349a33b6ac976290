/** The wizard front end: one page per step, suggestion chips, free text,
 * word replacement, and prompt copy-out. Everything is reachable by Tab,
 * activatable by Enter/Space, and arrow keys move inside chip groups.
 */

import { ApiClient, ApiError, type FetchLike } from "./api.js";
import { applyPalette } from "./palette.js";
import { chipButton, controlButton, el, wireArrowKeys } from "./views.js";
import type {
  PromptReport,
  SessionSnapshot,
  StepKind,
  SuggestRequest,
  WizardAction,
} from "./types.js";

export interface ClipboardLike {
  writeText(text: string): Promise<void>;
}

export interface AppOptions {
  root: HTMLElement;
  baseUrl: string;
  fetchImpl?: FetchLike;
  clipboard?: ClipboardLike | null;
}

type WizardStep = Exclude<StepKind, "done">;

interface StepInfo {
  title: string;
  lead: string;
  multi: boolean;
  suggests: boolean;
  skippable: boolean;
}

const STEP_INFO: Record<WizardStep, StepInfo> = {
  environment: {
    title: "Environment",
    lead: "Where does your image take place?",
    multi: false,
    suggests: true,
    skippable: true,
  },
  subjects: {
    title: "Subjects",
    lead: "Pick the people and things that appear in the image.",
    multi: true,
    suggests: true,
    skippable: true,
  },
  actions: {
    title: "Actions",
    lead: "Pick what the subjects are doing.",
    multi: true,
    suggests: true,
    skippable: true,
  },
  scene: {
    title: "Scene",
    lead: "Choose or write the sentence that describes your image.",
    multi: false,
    suggests: true,
    skippable: false,
  },
  style: {
    title: "Style",
    lead: "Pick an artistic style, or skip this step.",
    multi: false,
    suggests: false,
    skippable: true,
  },
};

const STEP_ORDER: WizardStep[] = [
  "environment",
  "subjects",
  "actions",
  "scene",
  "style",
];

export const STYLE_CHOICES = [
  "oil painting",
  "watercolor",
  "photorealistic",
  "pencil sketch",
  "3d render",
  "pixel art",
  "comic book",
  "impressionist",
];

const SYNONYM_MENU_SIZE = 5;

interface PageModel {
  loaded: boolean;
  shown: string[];
  selected: string[];
  prefill: string | null;
  draft: string;
  typedKeys: number;
  note: string;
}

function emptyPage(): PageModel {
  return {
    loaded: false,
    shown: [],
    selected: [],
    prefill: null,
    draft: "",
    typedKeys: 0,
    note: "",
  };
}

interface PendingRequest {
  controller: AbortController;
  label: string;
}

interface WordMenu {
  word: string;
  items: string[];
}

function isAbort(err: unknown): boolean {
  // DOMException does not extend Error in every runtime; match by name.
  return (
    typeof err === "object" &&
    err !== null &&
    (err as { name?: unknown }).name === "AbortError"
  );
}

export class PromptWizard {
  readonly client: ApiClient;

  private readonly root: HTMLElement;
  private readonly clipboard: ClipboardLike | null;
  private readonly main: HTMLElement;
  private readonly progress: HTMLOListElement;
  private readonly statusRegion: HTMLElement;
  private readonly alertRegion: HTMLElement;

  private session: SessionSnapshot | null = null;
  private pages = new Map<string, PageModel>();
  private pending: PendingRequest | null = null;
  private wordMenu: WordMenu | null = null;
  private prompt: PromptReport | null = null;
  private copyFallback = false;
  private focusHeading = false;
  private readonly ops = new Set<Promise<unknown>>();

  constructor(options: AppOptions) {
    this.root = options.root;
    this.clipboard =
      options.clipboard !== undefined
        ? options.clipboard
        : (navigator.clipboard ?? null);
    this.client = new ApiClient(options.baseUrl, options.fetchImpl);

    applyPalette(this.root.ownerDocument.documentElement);
    this.root.replaceChildren();
    this.root.classList.add("pw-app");

    const header = el("header", { class: "masthead" }, [
      el("p", { class: "brand", text: "Prompt Builder" }),
    ]);
    this.progress = el("ol", { id: "progress", class: "progress" });
    const nav = el("nav", { "aria-label": "Steps" }, [this.progress]);
    this.main = el("main", { id: "pw-main" });
    this.statusRegion = el("div", {
      id: "status-region",
      class: "status-region",
      role: "status",
      "aria-live": "polite",
    });
    this.alertRegion = el("div", {
      id: "alert-region",
      class: "alert-region",
      role: "alert",
    });
    this.root.append(header, nav, this.main, this.alertRegion, this.statusRegion);
  }

  /** Create the backing session and show the first step. */
  start(): Promise<void> {
    const task = (async () => {
      this.session = await this.client.createSession();
      this.focusHeading = true;
      this.render();
      this.ensureStepData();
    })().catch((err) => this.reportError(err));
    return this.track(task);
  }

  /** Resolves once no requests are in flight (for tests and scripting). */
  async whenIdle(): Promise<void> {
    while (this.ops.size > 0) {
      await Promise.allSettled([...this.ops]);
    }
  }

  snapshot(): SessionSnapshot | null {
    return this.session;
  }

  private track<T>(promise: Promise<T>): Promise<T> {
    this.ops.add(promise);
    void promise.finally(() => this.ops.delete(promise)).catch(() => undefined);
    return promise;
  }

  private run(task: () => Promise<void>): void {
    this.track(task().catch((err) => this.reportError(err)));
  }

  private reportError(err: unknown): void {
    if (isAbort(err)) {
      return;
    }
    if (err instanceof ApiError) {
      this.alert(err.body.message);
    } else {
      this.alert("The suggestion server could not be reached.");
    }
    this.render();
  }

  private announce(message: string): void {
    this.statusRegion.textContent = message;
  }

  private alert(message: string): void {
    this.alertRegion.textContent = message;
  }

  private clearAlert(): void {
    this.alertRegion.textContent = "";
  }

  private page(step: string): PageModel {
    let model = this.pages.get(step);
    if (!model) {
      model = emptyPage();
      this.pages.set(step, model);
    }
    return model;
  }

  private mustSession(): SessionSnapshot {
    if (!this.session) {
      throw new Error("The wizard has not started yet.");
    }
    return this.session;
  }

  /** Fetch whatever the current step needs, once. */
  private ensureStepData(): void {
    const session = this.session;
    if (!session) {
      return;
    }
    if (session.step === "done") {
      this.run(() => this.loadPrompt());
      return;
    }
    const step = session.step;
    if (step === "style") {
      const page = this.page(step);
      if (!page.loaded) {
        page.shown = [...STYLE_CHOICES];
        page.loaded = true;
        this.render();
      }
      return;
    }
    if (STEP_INFO[step].suggests && !this.page(step).loaded) {
      this.run(() => this.loadSuggestions(step, false));
    }
  }

  private async loadSuggestions(step: WizardStep, more: boolean): Promise<void> {
    const session = this.mustSession();
    this.cancelPending();
    const controller = new AbortController();
    this.pending = { controller, label: `suggestions for ${step}` };
    this.render();

    const query: SuggestRequest = { step };
    if (more) {
      query.exclude = [...this.page(step).shown];
    }
    try {
      const result = await this.client.suggest(session.id, query, controller.signal);
      const page = this.page(step);
      const fresh = result.items.filter(
        (item) =>
          !page.shown.some(
            (shown) => shown.toLowerCase() === item.toLowerCase(),
          ),
      );
      page.shown.push(...fresh);
      page.loaded = true;
      page.note = result.error ? result.error.message : "";
      this.announce(
        fresh.length > 0
          ? `${fresh.length} suggestion(s) loaded.`
          : "No new suggestions were found.",
      );
    } catch (err) {
      if (isAbort(err)) {
        this.announce("Suggestion request cancelled.");
      } else if (err instanceof ApiError) {
        this.alert(err.body.message);
      } else {
        throw err;
      }
    } finally {
      if (this.pending?.controller === controller) {
        this.pending = null;
      }
      this.render();
    }
  }

  /** Abort the in-flight request, if any; new requests supersede old ones. */
  private cancelPending(): void {
    if (this.pending) {
      this.pending.controller.abort();
      this.pending = null;
    }
  }

  private openWordMenu(word: string): void {
    this.run(async () => {
      const session = this.mustSession();
      this.cancelPending();
      const controller = new AbortController();
      this.pending = { controller, label: `replacements for ${word}` };
      this.render();
      try {
        const result = await this.client.suggest(
          session.id,
          { step: "synonyms", inputs: [word], min_count: SYNONYM_MENU_SIZE },
          controller.signal,
        );
        this.wordMenu = { word, items: result.items.slice(0, 8) };
        this.announce(`Replacement choices for "${word}" loaded.`);
      } catch (err) {
        if (isAbort(err)) {
          this.announce("Suggestion request cancelled.");
        } else if (err instanceof ApiError) {
          this.alert(err.body.message);
        } else {
          throw err;
        }
      } finally {
        if (this.pending?.controller === controller) {
          this.pending = null;
        }
        this.render();
        this.root.querySelector<HTMLElement>("#syn-0")?.focus();
      }
    });
  }

  private closeWordMenu(): void {
    this.wordMenu = null;
    this.render();
    this.root.querySelector<HTMLElement>("#word-0")?.focus();
  }

  private chooseReplacement(word: string, replacement: string): void {
    this.run(async () => {
      this.wordMenu = null;
      const applied = await this.act({
        kind: "replace_word",
        text: word,
        replacement,
      });
      if (applied) {
        const session = this.mustSession();
        const page = this.page("scene");
        page.draft = session.scene ?? "";
        page.prefill = session.scene;
        page.typedKeys = 0;
        this.announce(`Replaced "${word}" with "${replacement}".`);
        this.render();
      }
    });
  }

  private async act(action: WizardAction): Promise<boolean> {
    const session = this.mustSession();
    const stepBefore = session.step;
    try {
      this.session = await this.client.applyAction(session.id, action);
    } catch (err) {
      if (err instanceof ApiError) {
        this.alert(err.body.message);
        this.render();
        return false;
      }
      throw err;
    }
    this.clearAlert();
    if (this.session.step !== stepBefore) {
      this.focusHeading = true;
    }
    this.render();
    this.ensureStepData();
    return true;
  }

  private commitStep(): void {
    this.run(async () => {
      const session = this.mustSession();
      if (session.step === "done") {
        return;
      }
      const step = session.step;
      const info = STEP_INFO[step];
      const page = this.page(step);
      const value = page.draft.trim();

      const actions: WizardAction[] = [];
      if (info.multi) {
        for (const pick of page.selected) {
          actions.push({ kind: "accept", text: pick, advance: false, step });
        }
        if (value) {
          actions.push({ kind: "type", text: value, advance: true, step });
        } else if (actions.length > 0) {
          actions[actions.length - 1].advance = true;
        }
      } else if (value) {
        if (page.prefill !== null && value === page.prefill) {
          actions.push({ kind: "accept", text: value, advance: true, step });
        } else if (page.prefill !== null) {
          actions.push({
            kind: "edit",
            text: value,
            keystrokes: page.typedKeys,
            advance: true,
            step,
          });
        } else {
          actions.push({ kind: "type", text: value, advance: true, step });
        }
      }
      if (actions.length === 0) {
        this.announce("Pick a suggestion or type your own first.");
        return;
      }
      for (const action of actions) {
        if (!(await this.act(action))) {
          return;
        }
      }
    });
  }

  private toggleChip(step: WizardStep, text: string): void {
    const info = STEP_INFO[step];
    const page = this.page(step);
    if (info.multi) {
      const index = page.selected.indexOf(text);
      if (index >= 0) {
        page.selected.splice(index, 1);
      } else {
        page.selected.push(text);
      }
      this.render();
      return;
    }
    const already = page.selected.length === 1 && page.selected[0] === text;
    if (already) {
      page.selected = [];
      page.prefill = null;
      page.draft = "";
    } else {
      page.selected = [text];
      page.prefill = text;
      page.draft = text;
    }
    page.typedKeys = 0;
    if (step === "scene" && !already) {
      // Commit immediately so the scene's words become replaceable.
      this.run(async () => {
        await this.act({ kind: "accept", text, advance: false, step });
      });
      return;
    }
    this.render();
  }

  private skip(): void {
    const session = this.mustSession();
    const step = session.step;
    this.run(async () => {
      await this.act({ kind: "skip", step });
    });
  }

  private goBack(): void {
    this.run(async () => {
      await this.act({ kind: "back" });
    });
  }

  private restart(): void {
    this.run(async () => {
      const applied = await this.act({ kind: "restart" });
      if (applied) {
        this.pages.clear();
        this.prompt = null;
        this.copyFallback = false;
        this.wordMenu = null;
        this.announce("Started over. Your interaction history is kept.");
        this.render();
        this.ensureStepData();
      }
    });
  }

  private async loadPrompt(): Promise<void> {
    const session = this.mustSession();
    try {
      this.prompt = await this.client.getPrompt(session.id);
    } catch (err) {
      this.prompt = null;
      if (err instanceof ApiError) {
        this.alert(err.body.message);
      } else {
        throw err;
      }
    }
    this.render();
  }

  private copyPrompt(): void {
    this.run(async () => {
      if (!this.prompt) {
        return;
      }
      if (!this.clipboard) {
        this.showCopyFallback();
        return;
      }
      try {
        await this.clipboard.writeText(this.prompt.text);
      } catch {
        this.showCopyFallback();
        return;
      }
      this.announce("Prompt copied to the clipboard.");
    });
  }

  private showCopyFallback(): void {
    this.copyFallback = true;
    this.render();
    const box = this.root.querySelector<HTMLTextAreaElement>("#copy-fallback");
    if (box) {
      box.focus();
      box.select();
    }
    this.announce(
      "Copying failed; the prompt text below is selected for manual copying.",
    );
  }

  // -- rendering ------------------------------------------------------------

  private render(): void {
    const active = document.activeElement;
    const focusId = active instanceof HTMLElement ? active.id : "";

    this.renderProgress();
    const session = this.session;
    if (!session) {
      this.main.replaceChildren(el("p", { text: "Starting the wizard…" }));
      return;
    }
    this.main.replaceChildren(
      ...(session.step === "done" ? this.buildDonePage() : this.buildStepPage(session.step)),
    );

    if (this.focusHeading) {
      this.focusHeading = false;
      this.main.querySelector<HTMLElement>("#page-title")?.focus();
    } else if (focusId) {
      document.getElementById(focusId)?.focus();
    }
  }

  private renderProgress(): void {
    const current = this.session?.step ?? "environment";
    const entries: Array<[string, string]> = STEP_ORDER.map((step) => [
      step,
      STEP_INFO[step].title,
    ]);
    entries.push(["done", "Finish"]);
    this.progress.replaceChildren(
      ...entries.map(([step, title]) =>
        el(
          "li",
          step === current
            ? { "aria-current": "step", class: "current", text: title }
            : { text: title },
        ),
      ),
    );
  }

  private buildStepPage(step: WizardStep): HTMLElement[] {
    const info = STEP_INFO[step];
    const index = STEP_ORDER.indexOf(step) + 1;
    const page = this.page(step);
    const nodes: HTMLElement[] = [
      el("h1", {
        id: "page-title",
        tabindex: "-1",
        text: `Step ${index} of ${STEP_ORDER.length}: ${info.title}`,
      }),
      el("p", { class: "lead", text: info.lead }),
    ];

    nodes.push(this.buildSuggestionSection(step, page));
    if (step === "scene" && this.session?.scene) {
      nodes.push(this.buildWordPanel(this.session.scene));
      if (this.wordMenu) {
        nodes.push(this.buildWordMenu(this.wordMenu));
      }
    }
    nodes.push(this.buildFreeTextSection(step, info, page));
    nodes.push(this.buildControls(step, info));
    return nodes;
  }

  private buildSuggestionSection(step: WizardStep, page: PageModel): HTMLElement {
    const heading = el("h2", { id: "suggestions-heading", text: "Suggestions" });
    const grid = el("div", {
      id: "chip-grid",
      class: "chip-grid",
      role: "group",
      "aria-label": "Suggestions",
      "aria-busy": this.pending ? "true" : "false",
    });
    page.shown.forEach((text, i) => {
      const chip = chipButton(text, {
        id: `chip-${i}`,
        pressed: page.selected.includes(text),
      });
      chip.addEventListener("click", () => this.toggleChip(step, text));
      grid.append(chip);
    });
    wireArrowKeys(grid);

    const section = el("section", { "aria-labelledby": "suggestions-heading" }, [
      heading,
    ]);
    if (page.note) {
      section.append(el("p", { id: "suggestion-note", class: "note", text: page.note }));
    }
    section.append(grid);
    if (this.pending) {
      section.append(el("p", { class: "muted", text: "Loading suggestions…" }));
    } else if (page.loaded && page.shown.length === 0) {
      section.append(
        el("p", { class: "muted", text: "No suggestions yet; type your own below." }),
      );
    }
    return section;
  }

  private buildWordPanel(scene: string): HTMLElement {
    const grid = el("div", {
      id: "word-grid",
      role: "group",
      "aria-label": "Scene words",
      class: "chip-grid",
    });
    scene.split(/\s+/).forEach((token, i) => {
      const word = token.replace(/^\W+|\W+$/g, "");
      if (!word) {
        return;
      }
      const button = el(
        "button",
        { type: "button", id: `word-${i}`, class: "chip word" },
        [token],
      );
      button.addEventListener("click", () => this.openWordMenu(word));
      grid.append(button);
    });
    wireArrowKeys(grid);
    return el("section", { class: "panel", "aria-labelledby": "scene-words-heading" }, [
      el("h2", { id: "scene-words-heading", text: "Your scene" }),
      el("p", {
        class: "muted",
        text: "Select a word to swap it for a suggested alternative.",
      }),
      grid,
    ]);
  }

  private buildWordMenu(menu: WordMenu): HTMLElement {
    const list = el("div", {
      id: "syn-menu",
      role: "group",
      "aria-label": `Replacements for ${menu.word}`,
      class: "chip-grid",
    });
    menu.items.forEach((item, i) => {
      const button = el(
        "button",
        { type: "button", id: `syn-${i}`, class: "chip" },
        [item],
      );
      button.addEventListener("click", () =>
        this.chooseReplacement(menu.word, item),
      );
      list.append(button);
    });
    wireArrowKeys(list);
    const close = controlButton("Close", { id: "close-menu" });
    close.addEventListener("click", () => this.closeWordMenu());
    const panel = el(
      "section",
      { class: "panel", "aria-labelledby": "syn-heading" },
      [
        el("h2", { id: "syn-heading", text: `Replace "${menu.word}"` }),
        list,
        close,
      ],
    );
    panel.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Escape") {
        event.preventDefault();
        this.closeWordMenu();
      }
    });
    return panel;
  }

  private buildFreeTextSection(
    step: WizardStep,
    info: StepInfo,
    page: PageModel,
  ): HTMLElement {
    const label = el("label", {
      for: "free-text",
      text: info.multi
        ? `Add your own (${info.title.toLowerCase()})`
        : `Your own ${info.title.toLowerCase()}`,
    });
    const field =
      step === "scene"
        ? el("textarea", { id: "free-text", rows: "3" })
        : el("input", { id: "free-text", type: "text" });
    field.value = page.draft;
    field.setAttribute("aria-describedby", "free-text-hint");
    field.addEventListener("input", () => {
      page.draft = field.value;
    });
    field.addEventListener("keydown", (event) => {
      const key = (event as KeyboardEvent).key;
      if (key === "Enter" && !(field instanceof HTMLTextAreaElement)) {
        event.preventDefault();
        this.commitStep();
        return;
      }
      if (key.length === 1 || key === "Backspace" || key === "Delete") {
        page.typedKeys += 1;
      }
    });
    return el("div", { class: "field" }, [
      label,
      field,
      el("p", {
        id: "free-text-hint",
        class: "hint",
        text: "Press Next to continue with your selection or text.",
      }),
    ]);
  }

  private buildControls(step: WizardStep, info: StepInfo): HTMLElement {
    const controls = el("div", { class: "controls" });

    const next = controlButton("Next", { id: "next-btn", primary: true });
    next.addEventListener("click", () => this.commitStep());
    controls.append(next);

    if (info.suggests) {
      const more = controlButton("More suggestions", { id: "more-btn" });
      more.addEventListener("click", () =>
        this.run(() => this.loadSuggestions(step, true)),
      );
      controls.append(more);
    }
    if (this.pending) {
      const cancel = controlButton("Cancel request", { id: "cancel-btn" });
      cancel.addEventListener("click", () => {
        this.cancelPending();
        this.render();
      });
      controls.append(cancel);
    }
    if (info.skippable) {
      const skipButton = controlButton("Skip", { id: "skip-btn" });
      skipButton.addEventListener("click", () => this.skip());
      controls.append(skipButton);
    }
    const back = controlButton("Back", {
      id: "back-btn",
      disabled: step === "environment",
    });
    back.addEventListener("click", () => this.goBack());
    controls.append(back);

    const restart = controlButton("Restart", { id: "restart-btn" });
    restart.addEventListener("click", () => this.restart());
    controls.append(restart);

    return controls;
  }

  private buildDonePage(): HTMLElement[] {
    const nodes: HTMLElement[] = [
      el("h1", { id: "page-title", tabindex: "-1", text: "Your prompt is ready" }),
    ];
    const prompt = this.prompt;
    if (prompt) {
      const percent = Math.round(prompt.effort.savings_ratio * 1000) / 10;
      nodes.push(
        el("section", { class: "panel", "aria-labelledby": "prompt-heading" }, [
          el("h2", { id: "prompt-heading", text: "Final prompt" }),
          el("p", { id: "prompt-text", class: "prompt-text", text: prompt.text }),
          el("p", {
            id: "effort-line",
            class: "muted",
            text:
              `${prompt.char_count} characters; ${prompt.effort.typed_keystrokes}` +
              ` typed keystrokes, ${prompt.effort.pointer_actions} pointer actions;` +
              ` ${percent}% of the prompt came from suggestions.`,
          }),
        ]),
      );
    } else {
      nodes.push(el("p", { class: "muted", text: "Assembling your prompt…" }));
    }

    const controls = el("div", { class: "controls" });
    const copy = controlButton("Copy prompt", {
      id: "copy-btn",
      primary: true,
      disabled: !prompt,
    });
    copy.addEventListener("click", () => this.copyPrompt());
    controls.append(copy);
    const back = controlButton("Back", { id: "back-btn" });
    back.addEventListener("click", () => this.goBack());
    controls.append(back);
    const restart = controlButton("Start over", { id: "restart-btn" });
    restart.addEventListener("click", () => this.restart());
    controls.append(restart);
    nodes.push(controls);

    if (this.copyFallback && prompt) {
      const box = el("textarea", {
        id: "copy-fallback",
        rows: "3",
        readonly: true,
        "aria-label": "Prompt text to copy manually",
      });
      box.value = prompt.text;
      nodes.push(box);
    }
    return nodes;
  }
}
