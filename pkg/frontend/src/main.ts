/**
 * Browser bootstrap: build the client against the page's own origin (or a
 * `data-api-base` override on <html>), mount the view into #app, and start
 * the warning poll once a session exists.
 */

import { FetchLike, ProofkitClient } from "./api.js";
import { Controller, Download } from "./controller.js";
import { mount } from "./mount.js";
import { view, Actions } from "./view.js";

function downloadFile(file: Download): void {
  const blob = new Blob([file.content], { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = file.name;
  anchor.click();
  URL.revokeObjectURL(url);
}

export function boot(): void {
  const root = document.getElementById("app");
  if (root === null) return;
  const base = document.documentElement.dataset["apiBase"] ?? "";
  const fetchLike: FetchLike = (url, init) => fetch(url, init);
  const client = new ProofkitClient(fetchLike, base);

  const controller: Controller = new Controller(
    client,
    (state) => mount(document, root, view(state, actions)),
    { download: downloadFile },
  );

  const actions: Actions = {
    createSession: (system, goal) => void controller.createSession(system, goal),
    loadFile: (text) => void controller.loadFile(text),
    selectGoal: (index) => void controller.selectGoal(index),
    clickRule: (template) => void controller.clickRule(template),
    witnessChange: (position, value) =>
      controller.witnessChange(position, value),
    witnessSubmit: () => void controller.witnessSubmit(),
    witnessCancel: () => controller.witnessCancel(),
    gotoEntry: (index) => void controller.gotoEntry(index),
    toggleNotation: (notation) => void controller.toggleNotation(notation),
    save: () => controller.save(),
    exportScript: () => void controller.exportScript(),
  };

  mount(document, root, view(controller.state, actions));
}

if (typeof document !== "undefined" && typeof window !== "undefined") {
  boot();
}
