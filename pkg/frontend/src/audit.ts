/** Ledger of every numeric value that arrived in a service response.
 *
 * The UI is a pure client: a number may only reach the screen if the
 * service sent it. Views format values through `display`, which checks
 * membership in this ledger, so any client-side arithmetic would surface
 * immediately (tests assert it; in the browser a violation logs loudly).
 */

const seen = new Set<string>();
let strict = false;
let violations: string[] = [];

function canonical(value: number | string): string {
  if (typeof value === "string") return value;
  // one canonical spelling per float so 2 and 2.0 match
  return Object.is(value, -0) ? "0" : String(value);
}

function walk(payload: unknown): void {
  if (typeof payload === "number") {
    seen.add(canonical(payload));
  } else if (typeof payload === "string") {
    seen.add(payload);
  } else if (Array.isArray(payload)) {
    payload.forEach(walk);
  } else if (payload !== null && typeof payload === "object") {
    for (const v of Object.values(payload)) walk(v);
  }
}

/** Record every scalar of a response body. Called by the API client. */
export function registerResponse(payload: unknown): void {
  walk(payload);
}

/** Enable hard auditing (tests): unknown values throw instead of logging. */
export function setStrictAudit(on: boolean): void {
  strict = on;
  violations = [];
}

export function auditViolations(): string[] {
  return [...violations];
}

export function resetAudit(): void {
  seen.clear();
  violations = [];
}

export function isTraceable(value: number | string): boolean {
  return seen.has(canonical(value));
}

/** Format a service-provided value for the screen.
 *
 * `digits` trims the display (pure formatting); the traceability check
 * always runs against the raw value as received.
 */
export function display(value: number | string | null | undefined, digits = 6): string {
  if (value === null || value === undefined) return "-";
  if (!isTraceable(value)) {
    const message = `displayed value not traceable to a service response: ${value}`;
    violations.push(String(value));
    if (strict) throw new Error(message);
    console.error(message);
  }
  if (typeof value === "string") return value;
  const rounded = Number(value.toPrecision(digits));
  return String(rounded);
}
