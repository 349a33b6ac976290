import { PromptWizard } from "./app.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8000";
const root = document.getElementById("app");

if (root) {
  const app = new PromptWizard({
    root,
    baseUrl,
    clipboard: navigator.clipboard ?? null,
  });
  void app.start();
}
