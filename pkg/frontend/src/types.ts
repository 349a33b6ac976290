/** Payload shapes exchanged with the prompt-building API. */

export type StepKind =
  | "environment"
  | "subjects"
  | "actions"
  | "scene"
  | "style"
  | "done";

export interface InteractionEvent {
  kind: string;
  step: string;
  payload: string;
  replacement: string;
  keystroke_count: number;
  pointer_actions: number;
  advanced: boolean;
}

export interface SessionSnapshot {
  id: string;
  step: StepKind;
  environment: string | null;
  subjects: string[];
  actions: string[];
  scene: string | null;
  style: string | null;
  created: string;
  updated: string;
  events: InteractionEvent[];
}

export interface WizardAction {
  kind: string;
  text?: string;
  replacement?: string;
  keystrokes?: number;
  advance?: boolean;
  /* Current step, sent so a stale page cannot mutate a moved-on session. */
  step?: string;
}

export interface SuggestRequest {
  step: string;
  inputs?: string[];
  min_count?: number;
  exclude?: string[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  retriable: boolean;
}

export interface SuggestResponse {
  items: string[];
  exhausted: boolean;
  attempts_used: number;
  /* Present when exhausted: a human-readable hint, not a failure. */
  error?: ApiErrorBody;
}

export interface EffortReport {
  typed_keystrokes: number;
  pointer_actions: number;
  prompt_chars: number;
  savings_ratio: number;
}

export interface PromptReport {
  text: string;
  char_count: number;
  effort: EffortReport;
}
