/** Small DOM helpers; no template engine, no virtual DOM. */

import { display } from "./audit";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) {
    if (k === "class") node.className = v;
    else node.setAttribute(k, v);
  }
  node.append(...children);
  return node;
}

export function clear(node: HTMLElement): HTMLElement {
  node.replaceChildren();
  return node;
}

export function button(label: string, onClick: () => void, cls = "btn"): HTMLButtonElement {
  const b = el("button", { class: cls }, label);
  b.addEventListener("click", onClick);
  return b;
}

export function labeled(text: string, input: HTMLElement): HTMLElement {
  return el("label", { class: "field" }, el("span", {}, text), input);
}

/** Fixed-column data grid. Cell values go through the display audit. */
export function grid(headers: string[], rows: unknown[][]): HTMLTableElement {
  const table = el("table", { class: "grid" });
  const head = el("tr");
  for (const h of headers) head.append(el("th", {}, h));
  table.append(el("thead", {}, head));
  const body = el("tbody");
  for (const row of rows) {
    const tr = el("tr");
    for (const cell of row) {
      tr.append(el("td", {}, formatCell(cell)));
    }
    body.append(tr);
  }
  table.append(body);
  return table;
}

export function formatCell(cell: unknown): string {
  if (cell === null || cell === undefined) return "-";
  if (typeof cell === "boolean") return cell ? "yes" : "no";
  if (typeof cell === "number" || typeof cell === "string") return display(cell);
  return JSON.stringify(cell);
}

export function banner(kind: "error" | "info" | "stale", text: string): HTMLElement {
  return el("div", { class: `banner ${kind}` }, text);
}
