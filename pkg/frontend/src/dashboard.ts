import type { StatsResponse } from './types.js';

export interface CurvePoint {
  iteration: number;
  value: number;
}

export interface DashboardModel {
  templateCurve: CurvePoint[];
  instanceCurve: CurvePoint[];
  precisionMarkers: CurvePoint[];
  newTriggerVerbs: Array<{ iteration: number; verbs: Record<string, string[]> }>;
  relationCount: number;
  eventTypeCount: number;
  instanceCount: number;
  statusCounts: Record<string, number>;
}

/**
 * Shape the stats payload for display. Strictly a projection: every number
 * is copied from the response, nothing is summed or re-derived here, so the
 * dashboard can never disagree with the server.
 */
export function buildDashboard(stats: StatsResponse): DashboardModel {
  const templateCurve = stats.iterations.map((r) => ({
    iteration: r.iteration,
    value: r.cumulativeTemplates,
  }));
  const instanceCurve = stats.iterations.map((r) => ({
    iteration: r.iteration,
    value: r.cumulativeInstances,
  }));
  const precisionMarkers = stats.iterations
    .filter((r) => r.precision !== null)
    .map((r) => ({ iteration: r.iteration, value: r.precision as number }));
  const newTriggerVerbs = stats.iterations
    .filter((r) => Object.keys(r.newTriggerVerbs).length > 0)
    .map((r) => ({ iteration: r.iteration, verbs: r.newTriggerVerbs }));
  return {
    templateCurve,
    instanceCurve,
    precisionMarkers,
    newTriggerVerbs,
    relationCount: stats.relationCount,
    eventTypeCount: stats.eventTypeCount,
    instanceCount: stats.instanceCount,
    statusCounts: stats.templateStatusCounts,
  };
}

/** Points for an inline SVG polyline, scaled into a width x height box. */
export function polyline(points: CurvePoint[], width: number, height: number, pad = 4): string {
  if (points.length === 0) return '';
  const xs = points.map((p) => p.iteration);
  const ys = points.map((p) => p.value);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const xSpan = xMax - xMin || 1;
  const ySpan = yMax - yMin || 1;
  return points
    .map((p) => {
      const x = pad + ((p.iteration - xMin) / xSpan) * (width - 2 * pad);
      const y = height - pad - ((p.value - yMin) / ySpan) * (height - 2 * pad);
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(' ');
}
