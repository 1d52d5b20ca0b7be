import type {
  ComponentDetail,
  ComponentIndex,
  EmittedFile,
  InteractionDetail,
  InteractionResult,
  MovieInfo,
  SearchMatch,
  TimelineInfo,
  TreeOpResult,
  TreeSnapshot,
} from "./types.js";

/**
 * Minimal HTTP abstraction so the studio can run against a live server
 * (fetch) or a scripted backend in tests.  Bodies are already-decoded
 * JSON values.
 */
export interface HttpTransport {
  request(method: string, path: string, body?: unknown): Promise<HttpReply>;
}

export interface HttpReply {
  status: number;
  body: unknown;
}

/** Engine-reported failure, preserving the server's error name. */
export class ApiError extends Error {
  constructor(
    readonly errorName: string,
    readonly detail: string,
    readonly status: number,
  ) {
    super(`${errorName}: ${detail}`);
  }
}

export function fetchTransport(baseUrl = ""): HttpTransport {
  return {
    async request(method: string, path: string, body?: unknown): Promise<HttpReply> {
      const response = await fetch(baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
      return { status: response.status, body: await response.json() };
    },
  };
}

export type TreeOpRequest =
  | { op: "add-comment"; parentId: string; label: string }
  | { op: "edit"; stepId: string; label: string }
  | { op: "delete" | "enable" | "disable"; stepIds: string[] }
  | { op: "move"; stepIds: string[]; direction: "up" | "down" }
  | { op: "cut" | "copy"; stepIds: string[] }
  | { op: "paste"; targetId: string }
  | { op: "add-goal"; name: string };

/** Typed client for the studio HTTP API. */
export class StudioApi {
  constructor(private readonly transport: HttpTransport) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const reply = await this.transport.request(method, path, body);
    if (reply.status >= 400) {
      const raised = reply.body as { error?: string; detail?: string };
      throw new ApiError(raised.error ?? "GcrError", raised.detail ?? "", reply.status);
    }
    return reply.body as T;
  }

  components(query = "", domain?: string): Promise<ComponentIndex> {
    const params = new URLSearchParams();
    if (query) params.set("query", query);
    if (domain) params.set("domain", domain);
    const suffix = params.toString();
    return this.call("GET", suffix ? `/components?${suffix}` : "/components");
  }

  component(id: string): Promise<ComponentDetail> {
    return this.call("GET", `/components/${id}`);
  }

  tree(goal?: string): Promise<TreeSnapshot> {
    return this.call("GET", goal ? `/tree?goal=${encodeURIComponent(goal)}` : "/tree");
  }

  treeOp(request: TreeOpRequest): Promise<TreeOpResult> {
    return this.call("POST", "/tree/ops", request);
  }

  search(query: string, scope: "name" | "data" = "name"): Promise<{ matches: SearchMatch[] }> {
    return this.call("POST", "/tree/ops", { op: "search", query, scope });
  }

  interact(
    componentId: string,
    values: Record<string, string>,
    anchorStepId?: string,
  ): Promise<InteractionResult> {
    return this.call("POST", "/interactions", { componentId, values, anchorStepId });
  }

  interactionDetail(id: string): Promise<InteractionDetail> {
    return this.call("GET", `/interactions/${id}`);
  }

  modifyInteraction(id: string, values: Record<string, string>): Promise<InteractionResult> {
    return this.call("PUT", `/interactions/${id}`, { values });
  }

  deleteInteraction(id: string): Promise<{ interactionId: string; deleted: boolean; head: number }> {
    return this.call("DELETE", `/interactions/${id}`);
  }

  code(goal?: string, profile?: string): Promise<{ files: EmittedFile[] }> {
    const params = new URLSearchParams();
    if (goal) params.set("goal", goal);
    if (profile) params.set("profile", profile);
    const suffix = params.toString();
    return this.call("GET", suffix ? `/code?${suffix}` : "/code");
  }

  async codeBehind(stepId: string): Promise<string> {
    const reply = await this.call<{ stepId: string; code: string }>(
      "GET", `/code/step/${stepId}`);
    return reply.code;
  }

  timeline(): Promise<TimelineInfo> {
    return this.call("GET", "/timeline");
  }

  seek(t: number): Promise<{ head: number; length: number }> {
    return this.call("POST", "/timeline/seek", { t });
  }

  movie(from = 0): Promise<MovieInfo> {
    return this.call("GET", from > 0 ? `/movie?from=${from}` : "/movie");
  }
}
