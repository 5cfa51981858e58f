import type {
  ApiErrorBody,
  EventListResponse,
  InstanceListResponse,
  JudgmentListResponse,
  JudgmentResponse,
  MutationResponse,
  RelationListResponse,
  SampleResponse,
  StatsResponse,
  TemplateListResponse,
  TemplateResponse,
  ValidateResponse,
  Versioned,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${code}: ${detail}`);
    this.name = 'ApiError';
  }
}

/** Minimal response surface the client needs; satisfied by fetch's Response
 * and by test doubles. */
export interface TransportResponse {
  status: number;
  json(): Promise<unknown>;
}

export type Transport = (path: string, init?: RequestInit) => Promise<TransportResponse>;

export const fetchTransport: Transport = (path, init) => fetch(path, init);

/**
 * Watches the mutation counter the server attaches to every response.
 * A read should echo the last seen version and one of our own mutations
 * should advance it by exactly one; anything else means another writer
 * touched the project and the view is stale.
 */
export class VersionTracker {
  private last: number | null = null;

  constructor(private readonly onStale: (seen: number, expected: number) => void = () => {}) {}

  get current(): number | null {
    return this.last;
  }

  observeRead(version: number): void {
    if (this.last !== null && version !== this.last) {
      this.onStale(version, this.last);
    }
    this.last = version;
  }

  observeMutation(version: number): void {
    if (this.last !== null && version !== this.last + 1) {
      this.onStale(version, this.last + 1);
    }
    this.last = version;
  }

  reset(): void {
    this.last = null;
  }
}

export type TemplateFilters = {
  status?: string;
  iteration?: number;
  eventType?: string;
};

export interface JudgmentInput {
  templateId: string;
  verdict: 'correct' | 'wrong';
  iteration: number;
  note?: string;
}

function query(params: Record<string, string | number | undefined>): string {
  const pairs = Object.entries(params).filter(([, v]) => v !== undefined);
  if (pairs.length === 0) return '';
  const qs = new URLSearchParams();
  for (const [k, v] of pairs) qs.set(k, String(v));
  return '?' + qs.toString();
}

/**
 * Typed client for the curation service. Mutations are serialized through
 * an internal promise chain so at most one write is in flight, matching the
 * single-curator model; reads go out immediately.
 */
export class ApiClient {
  readonly versions: VersionTracker;
  private chain: Promise<void> = Promise.resolve();

  constructor(
    private readonly baseUrl: string,
    private readonly transport: Transport = fetchTransport,
    onStale?: (seen: number, expected: number) => void,
  ) {
    this.versions = new VersionTracker(onStale);
  }

  private async request<T extends Versioned>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.transport(this.baseUrl + path, init);
    const body = (await res.json()) as T | ApiErrorBody;
    if (res.status >= 400) {
      const err = body as ApiErrorBody;
      throw new ApiError(res.status, err.error ?? 'unknown_error', err.detail ?? '');
    }
    return body as T;
  }

  private async get<T extends Versioned>(path: string): Promise<T> {
    const body = await this.request<T>(path);
    this.versions.observeRead(body.version);
    return body;
  }

  private post<T extends Versioned>(path: string, payload: unknown): Promise<T> {
    const run = async (): Promise<T> => {
      const body = await this.request<T>(path, {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify(payload),
      });
      this.versions.observeMutation(body.version);
      return body;
    };
    const next = this.chain.then(run, run);
    this.chain = next.then(
      () => undefined,
      () => undefined,
    );
    return next;
  }

  listTemplates(filters: TemplateFilters = {}): Promise<TemplateListResponse> {
    return this.get('/templates' + query(filters));
  }

  getTemplate(id: string): Promise<TemplateResponse> {
    return this.get(`/templates/${id}`);
  }

  setStatus(id: string, status: string): Promise<MutationResponse> {
    return this.post(`/templates/${id}/status`, { status });
  }

  setRoles(id: string, roles: string[]): Promise<MutationResponse> {
    return this.post(`/templates/${id}/roles`, { roles });
  }

  listRelations(): Promise<RelationListResponse> {
    return this.get('/relations');
  }

  listInstances(relation?: string): Promise<InstanceListResponse> {
    return this.get('/instances' + query({ relation }));
  }

  sample(iteration: number, n = 100, seed = 0): Promise<SampleResponse> {
    return this.get('/sample' + query({ iteration, n, seed }));
  }

  postJudgment(input: JudgmentInput): Promise<JudgmentResponse> {
    return this.post('/judgments', {
      templateId: input.templateId,
      verdict: input.verdict,
      iteration: input.iteration,
      note: input.note ?? '',
    });
  }

  listJudgments(iteration?: number): Promise<JudgmentListResponse> {
    return this.get('/judgments' + query({ iteration }));
  }

  stats(): Promise<StatsResponse> {
    return this.get('/stats');
  }

  listEvents(): Promise<EventListResponse> {
    return this.get('/events');
  }

  validate(): Promise<ValidateResponse> {
    return this.get('/validate');
  }
}
