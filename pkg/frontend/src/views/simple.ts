/** Initialization, Listing and Ending menus. */

import type { WorkbenchClient } from "../api";
import { banner, button, clear, el, grid } from "../dom";
import { TABLE_NAMES } from "../types";
import { describe } from "./modification";

export function renderInitialization(root: HTMLElement, client: WorkbenchClient): void {
  const status = el("div");
  const confirm = el("input", { type: "checkbox" }) as HTMLInputElement;
  clear(root).append(
    el("h2", {}, "Initialization"),
    el("p", {}, "Erases all information in the database (all ten tables, models and optimizations)."),
    el("label", {}, confirm, " I understand this wipes the whole store"),
    button("erase everything", () => {
      clear(status);
      if (!confirm.checked) {
        status.append(banner("error", "tick the confirmation first"));
        return;
      }
      void client
        .initialize()
        .then((r) => {
          const rows = Object.entries(r.tables).map(([table, count]) => [table, count]);
          status.append(banner("info", "store initialized"), grid(["table", "records"], rows));
        })
        .catch((err) => status.append(banner("error", describe(err))));
    }),
    status,
  );
}

const REPORT_KINDS = [...TABLE_NAMES, "models", "optimizations"];

export function renderListing(root: HTMLElement, client: WorkbenchClient): void {
  const kind = el("select") as HTMLSelectElement;
  for (const k of REPORT_KINDS) kind.append(el("option", { value: k }, k));
  const experiment = el("input", { placeholder: "experiment filter (outcome)" }) as HTMLInputElement;
  const out = el("div");

  async function refresh(): Promise<void> {
    clear(out);
    try {
      const filters: Record<string, string> = {};
      if (kind.value === "outcome" && experiment.value.trim()) {
        filters["experiment_id"] = experiment.value.trim();
      }
      const listing = await client.report(kind.value, filters);
      const headers = listing.records.length ? Object.keys(listing.records[0] ?? {}) : [];
      out.append(
        el("div", { class: "count" }, `${listing.kind}: ${listing.count} record(s)`),
        listing.count
          ? grid(headers, listing.records.map((r) => headers.map((h) => r[h])))
          : el("div", { class: "empty" }, "empty"),
      );
    } catch (err) {
      out.append(banner("error", describe(err)));
    }
  }

  kind.addEventListener("change", () => void refresh());
  clear(root).append(
    el("h2", {}, "Listing"),
    kind,
    experiment,
    button("refresh", () => void refresh()),
    out,
  );
  void refresh();
}

export function renderEnding(root: HTMLElement): void {
  clear(root).append(
    el("h2", {}, "Ending"),
    el("p", {}, "Close this tab to end the session. The store keeps everything on disk; stop the service process when you are done."),
  );
}
