import { ApiClient, ApiError } from './client.js';
import { highlightTuple, renderKey, type SentenceSegment } from './highlight.js';
import { prefillRoles, roleSuggestions, validateRoles } from './roles.js';
import type { TemplateSummary } from './types.js';

export const SENTENCE_DISPLAY_CAP = 10;

/** Everything the queue card shows for one candidate. */
export interface CandidateView {
  id: string;
  eventType: string;
  rendering: string;
  status: string;
  supportCount: number;
  iterationDiscovered: number;
  sentences: SentenceSegment[][];
  totalSentences: number;
  hasMoreSentences: boolean;
  allSentences: SentenceSegment[][];
  rolePrefill: [string, string, string];
  roleSuggestions: string[][];
}

export interface ActionResult {
  ok: boolean;
  /** Inline validation problems; present means no request was sent. */
  validationErrors?: string[];
  /** Server refusal, surfaced for retry; the candidate stays in the queue. */
  apiError?: ApiError;
}

export interface QueueFilters {
  eventType?: string;
  iteration?: number;
}

/**
 * Review queue over the candidate templates. The server stays authoritative:
 * statuses shown are the ones it returned, actions advance only after the
 * mutation round trip succeeds, and a failed action leaves the candidate in
 * place with the error surfaced to the caller.
 */
export class ReviewQueue {
  private rows: TemplateSummary[] = [];

  constructor(
    private readonly client: ApiClient,
    readonly pageSize = 20,
  ) {}

  async load(filters: QueueFilters = {}): Promise<void> {
    const res = await this.client.listTemplates({ status: 'candidate', ...filters });
    this.rows = res.templates;
  }

  get size(): number {
    return this.rows.length;
  }

  get remaining(): number {
    return this.rows.filter((t) => t.status === 'candidate').length;
  }

  get pageCount(): number {
    return Math.max(1, Math.ceil(this.rows.length / this.pageSize));
  }

  page(index: number): TemplateSummary[] {
    const start = index * this.pageSize;
    return this.rows.slice(start, start + this.pageSize);
  }

  /** The next candidate still awaiting a verdict, or null when done. */
  current(): TemplateSummary | null {
    return this.rows.find((t) => t.status === 'candidate') ?? null;
  }

  /** Full card for one candidate: detail fetch plus relation suggestions.
   * Refuses to display a rendering that does not round-trip from the key
   * fields, which would mean the client is out of step with the server. */
  async candidateView(id: string): Promise<CandidateView> {
    const [detailRes, relationsRes] = await Promise.all([
      this.client.getTemplate(id),
      this.client.listRelations(),
    ]);
    const detail = detailRes.template;
    if (renderKey(detail) !== detail.rendering) {
      throw new Error(`rendering mismatch for template ${id}: ${detail.rendering}`);
    }
    const all = detail.supportingTuples.map(highlightTuple);
    return {
      id: detail.id,
      eventType: detail.eventType,
      rendering: detail.rendering,
      status: detail.status,
      supportCount: detail.supportCount,
      iterationDiscovered: detail.iterationDiscovered,
      sentences: all.slice(0, SENTENCE_DISPLAY_CAP),
      totalSentences: all.length,
      hasMoreSentences: all.length > SENTENCE_DISPLAY_CAP,
      allSentences: all,
      rolePrefill: prefillRoles(detail.eventType),
      roleSuggestions: roleSuggestions(relationsRes.relations, detail.eventType),
    };
  }

  /** Label and accept. Invalid labels never reach the wire. */
  async accept(id: string, roles: string[]): Promise<ActionResult> {
    const row = this.row(id);
    const validationErrors = validateRoles(row.eventType, roles);
    if (validationErrors.length > 0) {
      return { ok: false, validationErrors };
    }
    try {
      await this.client.setRoles(id, roles);
      const res = await this.client.setStatus(id, 'accepted');
      this.replace(res.template);
      return { ok: true };
    } catch (e) {
      return { ok: false, apiError: toApiError(e) };
    }
  }

  async reject(id: string): Promise<ActionResult> {
    this.row(id);
    try {
      const res = await this.client.setStatus(id, 'rejected');
      this.replace(res.template);
      return { ok: true };
    } catch (e) {
      return { ok: false, apiError: toApiError(e) };
    }
  }

  private row(id: string): TemplateSummary {
    const row = this.rows.find((t) => t.id === id);
    if (!row) throw new Error(`template ${id} is not in the loaded queue`);
    return row;
  }

  private replace(fresh: TemplateSummary): void {
    const at = this.rows.findIndex((t) => t.id === fresh.id);
    if (at >= 0) this.rows[at] = fresh;
  }
}

function toApiError(e: unknown): ApiError {
  if (e instanceof ApiError) return e;
  throw e;
}
