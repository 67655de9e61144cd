import { describe, expect, it } from "vitest";

import { LatestWins } from "../src/coalesce";

function deferred<T>() {
  let resolve!: (v: T) => void;
  let reject!: (e: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

const tick = () => new Promise((r) => setTimeout(r, 0));

describe("LatestWins coalescer", () => {
  it("delivers a single request", async () => {
    const delivered: number[] = [];
    const c = new LatestWins<number, number>(
      async (n) => n * 10,
      (r) => delivered.push(r),
    );
    c.submit(1);
    await tick();
    expect(delivered).toEqual([10]);
  });

  it("coalesces a burst to the latest submission", async () => {
    const gates: ReturnType<typeof deferred<number>>[] = [];
    const delivered: number[] = [];
    const c = new LatestWins<number, number>(
      (n) => {
        const gate = deferred<number>();
        gates.push(gate);
        return gate.promise.then(() => n);
      },
      (r) => delivered.push(r),
    );
    c.submit(1); // starts request 1
    c.submit(2); // queued
    c.submit(3); // replaces 2 in the queue
    expect(c.busy).toBe(true);
    gates[0]!.resolve(0); // request 1 lands but is stale
    await tick();
    gates[1]!.resolve(0); // queued request (3) lands
    await tick();
    expect(delivered).toEqual([3]);
    expect(gates.length).toBe(2); // request 2 never went out
  });

  it("drops a stale response even when it resolves late", async () => {
    const gates: ReturnType<typeof deferred<number>>[] = [];
    const delivered: number[] = [];
    const c = new LatestWins<number, number>(
      (n) => {
        const gate = deferred<number>();
        gates.push(gate);
        return gate.promise.then(() => n);
      },
      (r) => delivered.push(r),
    );
    c.submit(1);
    c.submit(2);
    gates[0]!.resolve(0);
    await tick();
    gates[1]!.resolve(0);
    await tick();
    expect(delivered).toEqual([2]);
  });

  it("reports errors only for the latest request", async () => {
    const errors: unknown[] = [];
    const delivered: number[] = [];
    const c = new LatestWins<number, number>(
      async (n) => {
        if (n === 2) throw new Error("boom");
        return n;
      },
      (r) => delivered.push(r),
      (e) => errors.push(e),
    );
    c.submit(2);
    await tick();
    expect(delivered).toEqual([]);
    expect(errors).toHaveLength(1);
    c.submit(5);
    await tick();
    expect(delivered).toEqual([5]);
  });
});
