/** A scripted stand-in for the edmlab service, driving WorkbenchClient
 * through its normal fetch path so the response audit stays in the loop. */

import type { FetchLike } from "../src/api";

export interface Call {
  method: string;
  path: string;
  body: unknown;
}

export class MockService {
  calls: Call[] = [];
  private routes = new Map<string, (body: unknown) => { status: number; payload: unknown }>();

  on(method: string, path: string, handler: (body: unknown) => unknown, status = 200): void {
    this.routes.set(`${method} ${path}`, (body) => ({ status, payload: handler(body) }));
  }

  fetch: FetchLike = (input, init) => {
    const method = init?.method ?? "GET";
    const url = new URL(input, "http://mock");
    const path = url.pathname + url.search;
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    this.calls.push({ method, path, body });
    const handler =
      this.routes.get(`${method} ${path}`) ?? this.routes.get(`${method} ${url.pathname}`);
    if (!handler) {
      return Promise.resolve(
        jsonResponse(404, {
          error: { code: "not_found", message: `no route for ${method} ${path}`, field: null },
        }),
      );
    }
    const { status, payload } = handler(body);
    return Promise.resolve(jsonResponse(status, payload));
  };

  callsTo(method: string, pathPrefix: string): Call[] {
    return this.calls.filter((c) => c.method === method && c.path.startsWith(pathPrefix));
  }
}

function jsonResponse(status: number, payload: unknown): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
