import { beforeEach, describe, expect, it } from "vitest";

import { ApiError, WorkbenchClient } from "../src/api";
import { isTraceable, resetAudit } from "../src/audit";
import { MockService } from "./mock";

describe("WorkbenchClient", () => {
  let service: MockService;
  let client: WorkbenchClient;

  beforeEach(() => {
    resetAudit();
    service = new MockService();
    client = new WorkbenchClient("/api", service.fetch);
  });

  it("lists entities with filters in the query string", async () => {
    service.on("GET", "/api/outcome", () => ({ kind: "outcome", count: 0, records: [] }));
    const result = await client.listEntities("outcome", { experiment_id: "E1" });
    expect(result.count).toBe(0);
    expect(service.calls[0]?.path).toBe("/api/outcome?experiment_id=E1");
  });

  it("maps service errors to ApiError with code and field", async () => {
    service.on(
      "PUT",
      "/api/inputs",
      () => ({ error: { code: "validation", message: "min_level must be below max_level", field: "min_level" } }),
      400,
    );
    const attempt = client.upsertEntity("inputs", { code: "I", min_level: 9, max_level: 1 });
    await expect(attempt).rejects.toMatchObject({
      status: 400,
      code: "validation",
      field: "min_level",
    });
  });

  it("wraps network failure as code=unreachable", async () => {
    const broken = new WorkbenchClient("/api", () => Promise.reject(new Error("refused")));
    await expect(broken.health()).rejects.toMatchObject({ code: "unreachable", status: 0 });
    await expect(broken.health()).rejects.toBeInstanceOf(ApiError);
  });

  it("registers every number of a successful response in the audit ledger", async () => {
    service.on("POST", "/api/analysis/anova1", () => ({
      experiment_id: "E1",
      output_code: "vw",
      factor_codes: ["I"],
      levels: {},
      table: {
        alpha: 0.05,
        factor_codes: ["I"],
        rows: [
          { source: "factor_A", sum_squares: 6.0, df: 2, mean_square: 3.0, f_statistic: 3.0, p_value: 0.125 },
        ],
        significant: { factor_A: false },
      },
    }));
    await client.anova("anova1", "E1", "vw", ["I"]);
    for (const value of [0.05, 6.0, 2, 3.0, 0.125]) {
      expect(isTraceable(value)).toBe(true);
    }
  });

  it("does not register numbers from error responses", async () => {
    service.on(
      "GET",
      "/api/machine/NOPE",
      () => ({ error: { code: "not_found", message: "machine record 17 not found", field: null } }),
      404,
    );
    await expect(client.getEntity("machine", ["NOPE"])).rejects.toBeInstanceOf(ApiError);
    expect(isTraceable(17)).toBe(false);
  });

  it("sends batch what-if requests through the same endpoint", async () => {
    service.on("POST", "/api/whatif", (body) => {
      const b = body as { settings_list?: unknown[] };
      expect(b.settings_list).toHaveLength(2);
      return { settings_list: b.settings_list, predictions_list: [[], []] };
    });
    await client.whatIfBatch(["M0001"], [{ I: 2 }, { I: 10 }]);
    expect(service.calls[0]?.body).toMatchObject({ model_ids: ["M0001"] });
  });
});
