import { ApiClient } from './client.js';
import { buildDashboard, polyline } from './dashboard.js';
import { ReviewQueue, type CandidateView } from './queue.js';
import { PrecisionSession } from './review.js';

const PART_LABELS = ['arg1', 'verb', 'arg2', 'connector', 'arg3'] as const;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Array<Node | string>
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  node.append(...children);
  return node;
}

function clear(node: HTMLElement): HTMLElement {
  node.replaceChildren();
  return node;
}

class App {
  private client: ApiClient;
  private queue: ReviewQueue;
  private session: PrecisionSession | null = null;
  private root: HTMLElement;
  private banner: HTMLElement;
  private view: 'queue' | 'review' | 'dashboard' = 'queue';

  constructor(baseUrl: string, root: HTMLElement) {
    this.client = new ApiClient(baseUrl, undefined, () => this.onStale());
    this.queue = new ReviewQueue(this.client);
    this.root = root;
    this.banner = el('div', { class: 'banner', hidden: '' });
  }

  private onStale(): void {
    this.banner.textContent =
      'Another writer changed the project; the view was refreshed.';
    this.banner.removeAttribute('hidden');
    void this.render();
  }

  async render(): Promise<void> {
    clear(this.root);
    const tabs = el('nav', {});
    for (const name of ['queue', 'review', 'dashboard'] as const) {
      const b = el('button', { class: this.view === name ? 'tab active' : 'tab' }, name);
      b.addEventListener('click', () => {
        this.view = name;
        void this.render();
      });
      tabs.append(b);
    }
    this.root.append(tabs, this.banner);
    const body = el('main', {});
    this.root.append(body);
    if (this.view === 'queue') await this.renderQueue(body);
    else if (this.view === 'review') this.renderReviewControls(body);
    else await this.renderDashboard(body);
  }

  private async renderQueue(body: HTMLElement): Promise<void> {
    await this.queue.load();
    const current = this.queue.current();
    body.append(el('p', {}, `${this.queue.remaining} of ${this.queue.size} candidates awaiting review`));
    if (!current) {
      body.append(el('p', {}, 'Queue is empty.'));
      return;
    }
    const view = await this.queue.candidateView(current.id);
    body.append(this.candidateCard(view, body));
  }

  private candidateCard(view: CandidateView, body: HTMLElement): HTMLElement {
    const card = el('section', { class: 'card' });
    card.append(
      el('h2', {}, view.rendering),
      el('p', {}, `${view.eventType} · support ${view.supportCount} · iteration ${view.iterationDiscovered}`),
    );

    const shown = el('ul', {});
    for (const sentence of view.sentences) {
      const li = el('li', {});
      for (const seg of sentence) {
        li.append(el('mark', { class: seg.part }, seg.text), ' ');
      }
      shown.append(li);
    }
    card.append(shown);
    if (view.hasMoreSentences) {
      const expander = el('details', {}, el('summary', {}, `all ${view.totalSentences} occurrences`));
      const rest = el('ul', {});
      for (const sentence of view.allSentences.slice(view.sentences.length)) {
        const li = el('li', {});
        for (const seg of sentence) li.append(el('mark', { class: seg.part }, seg.text), ' ');
        rest.append(li);
      }
      expander.append(rest);
      card.append(expander);
    }

    const inputs = PART_LABELS.slice(0, 3).map((_, i) =>
      el('input', { value: view.rolePrefill[i] ?? '', list: 'role-suggestions', size: '32' }),
    );
    const datalist = el('datalist', { id: 'role-suggestions' });
    for (const triple of view.roleSuggestions) {
      for (const role of triple) datalist.append(el('option', { value: role }));
    }
    const errors = el('p', { class: 'errors' });
    const acceptBtn = el('button', {}, 'accept');
    const rejectBtn = el('button', {}, 'reject');
    acceptBtn.addEventListener('click', async () => {
      const roles = inputs.map((i) => i.value.trim());
      const result = await this.queue.accept(view.id, roles);
      if (!result.ok) {
        errors.textContent = (result.validationErrors ?? [result.apiError?.detail ?? '']).join('; ');
        return;
      }
      await this.render();
    });
    rejectBtn.addEventListener('click', async () => {
      const result = await this.queue.reject(view.id);
      if (!result.ok) {
        errors.textContent = result.apiError?.detail ?? 'rejection failed';
        return;
      }
      await this.render();
    });
    card.append(el('div', { class: 'labels' }, ...inputs, datalist), errors, acceptBtn, rejectBtn);
    void body;
    return card;
  }

  private renderReviewControls(body: HTMLElement): void {
    const iteration = el('input', { type: 'number', value: '1', size: '4' });
    const n = el('input', { type: 'number', value: '100', size: '5' });
    const seed = el('input', { type: 'number', value: '0', size: '5' });
    const start = el('button', {}, 'start session');
    const area = el('div', {});
    start.addEventListener('click', async () => {
      this.session = new PrecisionSession(
        this.client,
        Number(iteration.value),
        Number(n.value),
        Number(seed.value),
      );
      await this.session.start();
      this.renderSession(area);
    });
    body.append(
      el('p', {}, 'iteration ', iteration, ' sample size ', n, ' seed ', seed, ' ', start),
      area,
    );
  }

  private renderSession(area: HTMLElement): void {
    const session = this.session;
    if (!session) return;
    clear(area);
    const p = session.precision();
    area.append(
      el(
        'p',
        {},
        `${session.judgedCount} of ${session.total} judged` +
          (p === null ? '' : ` · running precision ${(100 * p).toFixed(1)}%`),
      ),
    );
    const t = session.current();
    if (!t) {
      area.append(el('p', {}, 'Session complete.'));
      return;
    }
    const correct = el('button', {}, 'correct');
    const wrong = el('button', {}, 'wrong');
    const judge = (verdict: 'correct' | 'wrong') => async () => {
      await session.judge(verdict);
      this.renderSession(area);
    };
    correct.addEventListener('click', judge('correct'));
    wrong.addEventListener('click', judge('wrong'));
    area.append(el('section', { class: 'card' }, el('h2', {}, t.rendering), correct, wrong));
  }

  private async renderDashboard(body: HTMLElement): Promise<void> {
    const stats = await this.client.stats();
    const model = buildDashboard(stats);
    const chart = (title: string, points: typeof model.templateCurve) => {
      const svg = document.createElementNS('http://www.w3.org/2000/svg', 'svg');
      svg.setAttribute('viewBox', '0 0 320 120');
      svg.setAttribute('class', 'chart');
      const line = document.createElementNS('http://www.w3.org/2000/svg', 'polyline');
      line.setAttribute('points', polyline(points, 320, 120));
      line.setAttribute('fill', 'none');
      line.setAttribute('stroke', 'currentColor');
      svg.append(line);
      const labels = points.map((pt) => `${pt.iteration}: ${pt.value}`).join('  ');
      return el('figure', {}, el('figcaption', {}, `${title}: ${labels}`), svg);
    };
    body.append(
      chart('cumulative templates', model.templateCurve),
      chart('cumulative instances', model.instanceCurve),
    );
    if (model.precisionMarkers.length > 0) {
      body.append(
        el(
          'p',
          {},
          'precision: ' +
            model.precisionMarkers
              .map((m) => `iteration ${m.iteration} → ${(100 * m.value).toFixed(1)}%`)
              .join(', '),
        ),
      );
    }
    const counts = Object.entries(model.statusCounts)
      .map(([k, v]) => `${v} ${k}`)
      .join(', ');
    body.append(
      el(
        'p',
        {},
        `${model.relationCount} relations · ${model.eventTypeCount} event types · ` +
          `${model.instanceCount} instances · templates: ${counts || 'none'}`,
      ),
    );
  }
}

function boot(): void {
  const root = document.getElementById('app');
  if (!root) return;
  const params = new URLSearchParams(window.location.search);
  const base = params.get('api') ?? 'http://127.0.0.1:8756';
  const app = new App(base, root);
  void app.render();
}

boot();
