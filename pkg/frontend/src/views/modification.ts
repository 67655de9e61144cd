/** Modification menu: CRUD over the ten tables. */

import type { WorkbenchClient } from "../api";
import { ApiError } from "../api";
import { banner, button, clear, el, grid, labeled } from "../dom";
import type { TableName } from "../types";
import { TABLE_NAMES } from "../types";

const KEY_FIELDS: Record<TableName, string[]> = {
  po: ["id"],
  poproperties: ["owner_id", "property_name"],
  to: ["id"],
  toproperties: ["owner_id", "property_name"],
  outcome: ["experiment_id", "run_index", "replicate_index"],
  inputs: ["code"],
  outputs: ["code"],
  we: ["id"],
  machine: ["id"],
  classic: ["id"],
};

const TEMPLATES: Partial<Record<TableName, string>> = {
  inputs: '{"code": "I", "name": "current", "unit": "A", "min_level": 2, "max_level": 10}',
  outputs: '{"code": "vw", "name": "volume wear", "unit": "mm3/min", "sense": "minimize"}',
  po: '{"id": "P1", "name": "die plate", "material": "steel", "shape_notes": ""}',
  to: '{"id": "T1", "name": "electrode", "material": "copper", "shape_notes": ""}',
  machine: '{"id": "M1", "name": "", "generator_type": "RC", "max_current": 50, "hourly_rate": "35.50"}',
  we: '{"id": "W1", "name": "gas-oil", "medium_class": "dielectric_liquid", "description": ""}',
  classic:
    '{"id": "C1", "material": "steel", "operation": "drilling", "method_name": "twist drill", "processing_time": 60, "cost_per_piece": "12.00"}',
};

export function renderModification(root: HTMLElement, client: WorkbenchClient): void {
  const tableSelect = el("select") as HTMLSelectElement;
  for (const t of TABLE_NAMES) tableSelect.append(el("option", { value: t }, t));
  const listing = el("div", { class: "listing" });
  const editor = el("textarea", { rows: "5", class: "record-editor" }) as HTMLTextAreaElement;
  const status = el("div");

  const current = (): TableName => tableSelect.value as TableName;

  async function refresh(): Promise<void> {
    const table = current();
    editor.value = TEMPLATES[table] ?? "{}";
    const response = await client.listEntities(table);
    clear(listing);
    const records = response.records;
    const headers = records.length ? Object.keys(records[0] ?? {}) : KEY_FIELDS[table];
    listing.append(
      el("div", { class: "count" }, `${response.kind}: ${response.count} record(s)`),
      grid(
        [...headers, ""],
        records.map((r) => [
          ...headers.map((h) => r[h]),
          "",
        ]),
      ),
    );
    // attach per-row delete buttons in the trailing column
    const bodyRows = listing.querySelectorAll("tbody tr");
    bodyRows.forEach((tr, i) => {
      const record = records[i];
      if (!record) return;
      const cell = tr.lastElementChild as HTMLElement;
      cell.replaceChildren(
        button("delete", () => {
          void remove(KEY_FIELDS[table].map((f) => String(record[f])));
        }, "btn small"),
      );
    });
  }

  async function upsert(): Promise<void> {
    clear(status);
    try {
      const record = JSON.parse(editor.value) as Record<string, unknown>;
      await client.upsertEntity(current(), record);
      await refresh();
    } catch (err) {
      status.append(banner("error", describe(err)));
    }
  }

  async function remove(key: string[]): Promise<void> {
    clear(status);
    try {
      await client.deleteEntity(current(), key);
      await refresh();
    } catch (err) {
      status.append(banner("error", describe(err)));
    }
  }

  tableSelect.addEventListener("change", () => void refresh());
  clear(root).append(
    el("h2", {}, "Modification"),
    labeled("table", tableSelect),
    listing,
    el("h3", {}, "Add or replace a record"),
    editor,
    button("save record", () => void upsert()),
    status,
  );
  void refresh().catch((err) => status.append(banner("error", describe(err))));
}

export function describe(err: unknown): string {
  if (err instanceof ApiError) {
    const field = err.field ? ` (field: ${err.field})` : "";
    return `${err.code}: ${err.message}${field}`;
  }
  return String(err);
}
