/**
 * Typed client for the merge-session HTTP API.
 *
 * Endpoints: POST /sessions (multipart) -> {id}; GET /sessions/{id} -> state;
 * PATCH /sessions/{id}/layers/{k} -> {revision}; PUT /sessions/{id}/engine;
 * GET /sessions/{id}/preview?format=png|pgm (X-Revision header);
 * GET /sessions/{id}/layers/{k}/thumb; GET /healthz.
 */

export type EngineName = "spatial" | "frequency";

export interface LayerState {
  name: string;
  coefficient: number;
  sx: number;
  sy: number;
}

export interface SessionState {
  id: string;
  revision: number;
  engine: EngineName;
  rows: number;
  cols: number;
  layers: LayerState[];
}

export interface PreviewPayload {
  bytes: Uint8Array;
  mediaType: string;
  revision: number;
  imagResidue: number;
  clampedFraction: number;
}

export interface UploadFileLike {
  name: string;
  data: Blob | Uint8Array;
}

/** Structured {code, message} failure from the server. */
export class ApiFailure extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiFailure";
  }
}

/** The server could not be contacted at all. */
export class ServerUnreachable extends Error {
  constructor(cause: unknown) {
    super("server unreachable");
    this.name = "ServerUnreachable";
    this.cause = cause;
  }
}

function headerNumber(response: Response, name: string): number {
  const raw = response.headers.get(name);
  if (raw === null) {
    throw new ApiFailure(response.status, "missing_header", `response lacks ${name}`);
  }
  return Number(raw);
}

export class TuneClient {
  constructor(readonly baseUrl: string = "") {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, init);
    } catch (cause) {
      throw new ServerUnreachable(cause);
    }
    if (!response.ok) {
      const body = await response.json().catch(() => null);
      const code = typeof body?.code === "string" ? body.code : `http_${response.status}`;
      const message = typeof body?.message === "string" ? body.message : response.statusText;
      throw new ApiFailure(response.status, code, message);
    }
    return response;
  }

  async health(): Promise<boolean> {
    const response = await this.request("/healthz");
    return (await response.json()).status === "ok";
  }

  async createSession(files: UploadFileLike[]): Promise<string> {
    const form = new FormData();
    for (const file of files) {
      const blob = file.data instanceof Blob ? file.data : new Blob([file.data as BlobPart]);
      form.append("files", blob, file.name);
    }
    const response = await this.request("/sessions", { method: "POST", body: form });
    return (await response.json()).id as string;
  }

  async getSession(id: string): Promise<SessionState> {
    const response = await this.request(`/sessions/${id}`);
    return (await response.json()) as SessionState;
  }

  async patchLayer(
    id: string,
    index: number,
    patch: { coefficient?: number; sx?: number; sy?: number },
  ): Promise<number> {
    const response = await this.request(`/sessions/${id}/layers/${index}`, {
      method: "PATCH",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(patch),
    });
    return (await response.json()).revision as number;
  }

  async setEngine(id: string, engine: EngineName): Promise<number> {
    const response = await this.request(`/sessions/${id}/engine`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ engine }),
    });
    return (await response.json()).revision as number;
  }

  async fetchPreview(id: string, format: "png" | "pgm" = "png"): Promise<PreviewPayload> {
    const response = await this.request(`/sessions/${id}/preview?format=${format}`);
    const bytes = new Uint8Array(await response.arrayBuffer());
    return {
      bytes,
      mediaType: response.headers.get("content-type") ?? "application/octet-stream",
      revision: headerNumber(response, "X-Revision"),
      imagResidue: headerNumber(response, "X-Imag-Residue"),
      clampedFraction: headerNumber(response, "X-Clamped-Fraction"),
    };
  }

  thumbUrl(id: string, index: number): string {
    return `${this.baseUrl}/sessions/${id}/layers/${index}/thumb`;
  }
}
