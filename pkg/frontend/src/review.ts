import { ApiClient } from './client.js';
import type { TemplateSummary } from './types.js';

export type Verdict = 'correct' | 'wrong';

/**
 * One precision-review session over a server-drawn sample. The sample and
 * any judgments already on record come from the API; resuming after a
 * reload re-fetches both and simply skips what was judged before, so the
 * session never re-asks a question the store has an answer for.
 */
export class PrecisionSession {
  private sample: TemplateSummary[] = [];
  private verdicts = new Map<string, string>();
  private queue: TemplateSummary[] = [];

  constructor(
    private readonly client: ApiClient,
    readonly iteration: number,
    private readonly n = 100,
    private readonly seed = 0,
  ) {}

  async start(): Promise<void> {
    const sampleRes = await this.client.sample(this.iteration, this.n, this.seed);
    this.sample = sampleRes.templates;
    const ids = new Set(this.sample.map((t) => t.id));
    const prior = await this.client.listJudgments(this.iteration);
    this.verdicts = new Map(
      prior.judgments.filter((j) => ids.has(j.templateId)).map((j) => [j.templateId, j.verdict]),
    );
    this.queue = this.sample.filter((t) => !this.verdicts.has(t.id));
  }

  get total(): number {
    return this.sample.length;
  }

  get judgedCount(): number {
    return this.verdicts.size;
  }

  get remainingCount(): number {
    return this.queue.length;
  }

  get done(): boolean {
    return this.queue.length === 0;
  }

  current(): TemplateSummary | null {
    return this.queue[0] ?? null;
  }

  /** Record a verdict for the current template. Counted only once the
   * server acknowledged it; the queue holds position on failure. */
  async judge(verdict: Verdict, note = ''): Promise<void> {
    const t = this.current();
    if (!t) throw new Error('session is complete');
    const res = await this.client.postJudgment({
      templateId: t.id,
      verdict,
      iteration: this.iteration,
      note,
    });
    this.verdicts.set(res.judgment.templateId, res.judgment.verdict);
    this.queue.shift();
  }

  /** Fraction of judged sample members marked correct; null before the
   * first verdict. */
  precision(): number | null {
    if (this.verdicts.size === 0) return null;
    let correct = 0;
    for (const verdict of this.verdicts.values()) {
      if (verdict === 'correct') correct += 1;
    }
    return correct / this.verdicts.size;
  }
}
