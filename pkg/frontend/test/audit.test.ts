import { beforeEach, describe, expect, it } from "vitest";

import {
  auditViolations,
  display,
  isTraceable,
  registerResponse,
  resetAudit,
  setStrictAudit,
} from "../src/audit";

describe("display audit", () => {
  beforeEach(() => {
    resetAudit();
    setStrictAudit(true);
  });

  it("accepts values that arrived in a response", () => {
    registerResponse({ table: { rows: [{ f_statistic: 3.0, p_value: 0.125 }] } });
    expect(display(3.0)).toBe("3");
    expect(display(0.125)).toBe("0.125");
    expect(auditViolations()).toEqual([]);
  });

  it("accepts decimal strings and the Infinity sentinel", () => {
    registerResponse({ total: "67.5000", f_statistic: "Infinity" });
    expect(display("67.5000")).toBe("67.5000");
    expect(display("Infinity")).toBe("Infinity");
  });

  it("rejects numbers the service never sent", () => {
    registerResponse({ value: 2.0 });
    expect(() => display(4.0)).toThrow(/not traceable/);
    expect(auditViolations()).toContain("4");
  });

  it("flags derived values: client-side arithmetic is not allowed", () => {
    registerResponse({ a: 2.0, b: 3.0 });
    const derived = 2.0 + 3.0;
    expect(isTraceable(derived)).toBe(false);
  });

  it("registers deeply nested arrays", () => {
    registerResponse({ predictions_list: [[{ value: 1.25 }], [{ value: -7.5 }]] });
    expect(isTraceable(1.25)).toBe(true);
    expect(isTraceable(-7.5)).toBe(true);
  });

  it("renders null as a dash without auditing", () => {
    expect(display(null)).toBe("-");
    expect(display(undefined)).toBe("-");
  });
});
