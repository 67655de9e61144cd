/** Single-page operator workbench: left menu rail, one view at a time.
 * Talks only to the edmlab HTTP service; shows a retry banner when the
 * service is unreachable instead of failing silently. */

import { WorkbenchClient } from "./api";
import { banner, button, clear, el } from "./dom";
import { WorkbenchView } from "./state";
import type { Menu } from "./types";
import { MENUS } from "./types";
import { renderModification } from "./views/modification";
import { renderOptimizing } from "./views/optimizing";
import { renderPlanning } from "./views/planning";
import { renderProcessing } from "./views/processing";
import { renderEnding, renderInitialization, renderListing } from "./views/simple";

const client = new WorkbenchClient("/api");
const view = new WorkbenchView(client);

const RENDERERS: Record<Menu, (root: HTMLElement) => void> = {
  initialization: (root) => renderInitialization(root, client),
  modification: (root) => renderModification(root, client),
  planning: (root) => renderPlanning(root, client),
  processing: (root) => renderProcessing(root, client),
  optimizing: (root) => renderOptimizing(root, client),
  listing: (root) => renderListing(root, client),
  ending: (root) => renderEnding(root),
};

function mount(): void {
  const app = document.getElementById("app");
  if (!app) return;
  const rail = el("nav", { class: "rail" });
  const content = el("main", { class: "content" });
  const offline = el("div");
  app.replaceChildren(offline, el("div", { class: "layout" }, rail, content));

  function navigate(menu: Menu): void {
    view.navigate(menu);
    rail.querySelectorAll("button").forEach((b) => {
      b.classList.toggle("active", b.dataset["menu"] === menu);
    });
    RENDERERS[menu](content);
  }

  for (const menu of MENUS) {
    const b = button(menu, () => navigate(menu), "btn rail-item");
    b.dataset["menu"] = menu;
    rail.append(b);
  }

  void client
    .health()
    .then(() => navigate(view.activeMenu))
    .catch(() => {
      clear(offline).append(
        banner("error", "service unreachable"),
        button("retry", () => {
          clear(offline);
          mount();
        }),
      );
    });
}

mount();
