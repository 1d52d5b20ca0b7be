import type { HttpReply, HttpTransport } from "../src/api.js";
import type { Goal } from "../src/types.js";

import componentsAll from "./fixtures/components.json";
import componentsW from "./fixtures/components_w.json";
import componentsWa from "./fixtures/components_wa.json";
import componentPrint from "./fixtures/component_print.json";
import componentWait from "./fixtures/component_wait.json";
import interactionI1 from "./fixtures/interaction_i1.json";
import interactionI2 from "./fixtures/interaction_i2.json";
import codeLive from "./fixtures/code.json";
import movieInfo from "./fixtures/movie.json";
import timelineInfo from "./fixtures/timeline.json";
import treeLive from "./fixtures/tree_live.json";

export interface LoggedRequest {
  method: string;
  path: string;
  body?: unknown;
}

const ok = (body: unknown): HttpReply => ({ status: 200, body });
const notFound = (error: string, detail: string): HttpReply => ({
  status: 404,
  body: { error, detail },
});

/**
 * Transport that replays responses recorded from the real server for
 * the hello-world project (see record_fixtures.py).  The only moving
 * part is the timeline head: seeking serves the tree snapshot the
 * server produced for that head.  Every request is logged so tests can
 * assert what was (or was not) sent.
 */
export class FakeBackend implements HttpTransport {
  readonly requests: LoggedRequest[] = [];
  head = 3;
  private queuedFailure: HttpReply | null = null;

  /** Make the next request fail with the given engine error. */
  failNext(status: number, error: string, detail = ""): void {
    this.queuedFailure = { status, body: { error, detail } };
  }

  sent(method: string, pathPrefix: string): LoggedRequest[] {
    return this.requests.filter(
      (r) => r.method === method && r.path.startsWith(pathPrefix),
    );
  }

  async request(method: string, path: string, body?: unknown): Promise<HttpReply> {
    this.requests.push({ method, path, body });
    if (this.queuedFailure) {
      const failure = this.queuedFailure;
      this.queuedFailure = null;
      return failure;
    }
    const [route, rawQuery] = path.split("?", 2) as [string, string?];
    const params = new URLSearchParams(rawQuery ?? "");

    if (method === "GET" && route === "/components") {
      return ok(this.componentIndex(params.get("query") ?? ""));
    }
    if (method === "GET" && route.startsWith("/components/")) {
      const id = route.slice("/components/".length);
      if (id === "wait-key-seconds") return ok(componentWait);
      if (id === "print-text-console") return ok(componentPrint);
      return notFound("UnknownComponent", `no component '${id}'`);
    }
    if (method === "GET" && route.startsWith("/interactions/")) {
      const id = route.slice("/interactions/".length);
      if (id === "i1") return ok(interactionI1);
      if (id === "i2") return ok(interactionI2);
      return notFound("UnknownInteraction", `no interaction '${id}'`);
    }
    if (method === "GET" && route === "/tree") {
      return ok({ goals: this.goalsAt(this.head), head: this.head });
    }
    if (method === "GET" && route === "/code") {
      return ok(codeLive);
    }
    if (method === "GET" && route === "/timeline") {
      return ok({ ...timelineInfo, head: this.head });
    }
    if (method === "GET" && route === "/movie") {
      const from = Number(params.get("from") ?? "0");
      const frames = movieInfo.frames.filter((f) => f.index > from);
      return ok({ frames, length: movieInfo.length, head: this.head });
    }
    if (method === "POST" && route === "/timeline/seek") {
      const t = (body as { t: number }).t;
      if (t < 0 || t > movieInfo.length) {
        return { status: 400, body: { error: "OutOfRange", detail: `no event ${t}` } };
      }
      this.head = t;
      return ok({ head: this.head, length: movieInfo.length });
    }
    if (method === "POST" && route === "/tree/ops") {
      const op = (body as { op: string }).op;
      if (op === "search") return ok({ matches: [] });
      return ok({ resultIds: [], head: this.head });
    }
    if (method === "POST" && route === "/interactions") {
      return { status: 201, body: { interactionId: "i3", stepIds: ["s9"], head: ++this.head } };
    }
    if (method === "PUT" && route.startsWith("/interactions/")) {
      const id = route.slice("/interactions/".length);
      return ok({ interactionId: id, stepIds: ["s4"], freshIds: [], head: ++this.head });
    }
    throw new Error(`fake backend has no route for ${method} ${path}`);
  }

  private componentIndex(query: string): unknown {
    if (query === "") return componentsAll;
    if (query === "w") return componentsW;
    if (query === "wa") return componentsWa;
    // unrecorded queries reuse the server's rule: name-prefix match
    const components = componentsAll.components.filter((c) =>
      c.name.toLowerCase().startsWith(query.toLowerCase()),
    );
    return { ...componentsAll, components };
  }

  private goalsAt(head: number): Goal[] {
    if (head >= movieInfo.length) return treeLive.goals as Goal[];
    const frame = movieInfo.frames.find((f) => f.index === head);
    if (frame) return frame.goals as Goal[];
    // head 0: the seeded root with nothing under it
    const root = treeLive.goals[0]!.root;
    return [{ name: "main", root: { ...root, children: [] } }] as Goal[];
  }
}
