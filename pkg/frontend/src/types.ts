/** Payload shapes of the curation API. Field names and nesting mirror the
 * server's JSON exactly; nothing here is derived client-side. */

export interface TemplateSummary {
  id: string;
  eventType: string;
  rendering: string;
  type1: string;
  verb: string;
  type2: string;
  connector: string;
  type3: string;
  status: 'candidate' | 'accepted' | 'rejected' | string;
  roleLabels: string[] | null;
  supportCount: number;
  iterationDiscovered: number;
  parentTemplateId: string | null;
}

export interface SupportingTuple {
  docId: string;
  sentIndex: number;
  arg1: string;
  verb: string;
  arg2: string;
  connector: string;
  arg3: string;
  normalizedArgs: string[];
  mode: string;
}

export interface TemplateDetail extends TemplateSummary {
  supportingTuples: SupportingTuple[];
  support: string[][];
}

export interface InstanceView {
  relation: string;
  eventType: string;
  roles: string[];
  args: string[];
  rawArgs: string[];
  templateId: string;
  docId: string;
  sentIndex: number;
}

export interface RelationView {
  eventType: string;
  roles: string[];
}

export interface JudgmentView {
  templateId: string;
  verdict: string;
  iteration: number;
  note: string;
}

export interface TriggerView {
  lemma: string;
  origin: string;
}

export interface EventView {
  eventType: string;
  triggers: TriggerView[];
}

export interface StatsRow {
  iteration: number;
  newTemplates: number;
  cumulativeTemplates: number;
  newInstances: number;
  cumulativeInstances: number;
  newTriggerVerbs: Record<string, string[]>;
  relationCount: number;
  precision: number | null;
  judged: number;
}

export interface Versioned {
  version: number;
}

export interface TemplateListResponse extends Versioned {
  total: number;
  templates: TemplateSummary[];
}

export interface TemplateResponse extends Versioned {
  template: TemplateDetail;
}

export interface MutationResponse extends Versioned {
  template: TemplateSummary;
}

export interface RelationListResponse extends Versioned {
  total: number;
  relations: RelationView[];
}

export interface InstanceListResponse extends Versioned {
  total: number;
  instances: InstanceView[];
}

export interface SampleResponse extends Versioned {
  total: number;
  templates: TemplateSummary[];
}

export interface JudgmentResponse extends Versioned {
  judgment: JudgmentView;
}

export interface JudgmentListResponse extends Versioned {
  total: number;
  judgments: JudgmentView[];
}

export interface StatsResponse extends Versioned {
  iterations: StatsRow[];
  relationCount: number;
  eventTypeCount: number;
  templateStatusCounts: Record<string, number>;
  instanceCount: number;
}

export interface EventListResponse extends Versioned {
  total: number;
  events: EventView[];
}

export interface ValidateResponse extends Versioned {
  ok: boolean;
  issues: string[];
}

export interface ApiErrorBody {
  error: string;
  detail: string;
}
