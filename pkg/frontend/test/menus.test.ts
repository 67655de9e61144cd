import { describe, expect, it } from "vitest";

import { MENUS } from "../src/types";
import { PROCESSING_OPTIONS } from "../src/views/processing";

describe("menu structure", () => {
  it("has the seven top-level menus", () => {
    expect(MENUS).toEqual([
      "initialization",
      "modification",
      "planning",
      "processing",
      "optimizing",
      "listing",
      "ending",
    ]);
  });

  it("processing exposes exactly ten options", () => {
    expect(PROCESSING_OPTIONS).toHaveLength(10);
    expect(PROCESSING_OPTIONS).toContain("Statistic processing");
    expect(PROCESSING_OPTIONS).toContain("One-factor dispersion analysis");
    expect(PROCESSING_OPTIONS).toContain("Two-factor dispersion analysis");
    expect(PROCESSING_OPTIONS).toContain("Comparative determination");
    expect(PROCESSING_OPTIONS).toContain("Economic calculus");
  });
});
