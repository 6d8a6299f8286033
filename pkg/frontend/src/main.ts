// Entry point: identity + document chooser in the top bar, App below.

import { ApiClient } from "./api.js";
import { App } from "./app.js";

function boot(): void {
  const memberInput = document.querySelector<HTMLInputElement>("#member-id")!;
  const documentInput = document.querySelector<HTMLInputElement>("#document-id")!;
  const loadButton = document.querySelector<HTMLButtonElement>("#load-document")!;
  const appRoot = document.querySelector<HTMLElement>("#app")!;

  const api = new ApiClient("", localStorage.getItem("deme.member") ?? "");
  memberInput.value = api.memberId;
  memberInput.addEventListener("change", () => {
    api.memberId = memberInput.value.trim();
    localStorage.setItem("deme.member", api.memberId);
  });

  const app = new App(appRoot, api);

  const load = () => {
    const documentId = documentInput.value.trim();
    if (documentId) {
      localStorage.setItem("deme.document", documentId);
      void app.loadDocument(documentId);
    }
  };
  loadButton.addEventListener("click", load);
  documentInput.addEventListener("keydown", (event) => {
    if (event.key === "Enter") load();
  });

  documentInput.value = localStorage.getItem("deme.document") ?? "";
  if (documentInput.value) load();
}

document.addEventListener("DOMContentLoaded", boot);
