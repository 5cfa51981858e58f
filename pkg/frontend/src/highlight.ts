import type { SupportingTuple, TemplateSummary } from './types.js';

export type ItemPart = 'arg1' | 'verb' | 'arg2' | 'connector' | 'arg3';

export interface SentenceSegment {
  part: ItemPart;
  text: string;
}

/** The five items of one supporting occurrence, in sentence order, each
 * tagged with its part so the renderer can highlight them distinctly. */
export function highlightTuple(t: SupportingTuple): SentenceSegment[] {
  return [
    { part: 'arg1', text: t.arg1 },
    { part: 'verb', text: t.verb },
    { part: 'arg2', text: t.arg2 },
    { part: 'connector', text: t.connector },
    { part: 'arg3', text: t.arg3 },
  ];
}

/**
 * Reassemble a template rendering from the key fields the API serves.
 * Must reproduce the server's `rendering` string exactly; the queue view
 * asserts this round trip before trusting its own display.
 */
export function renderKey(t: TemplateSummary): string {
  return `⟨${t.type1}⟩ ${t.verb} ⟨${t.type2}⟩ ${t.connector} ⟨${t.type3}⟩`;
}
