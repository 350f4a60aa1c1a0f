/** Pure session state helpers: ranking, band geometry, layout, edits.
 *
 * Everything here is deterministic and DOM-free so the load-bearing
 * behavior (band invariants and the gesture-to-batch translation) is
 * testable without a browser.
 */

import type {
  ControlStatus,
  CoverageReportDoc,
  EditOp,
  Ordinal,
  ScenarioDoc,
  Stage,
  TaxonomyDoc,
} from "./types.js";

export const ORDINAL_SCORE: Record<Ordinal, number> = { low: 1, medium: 2, high: 3 };

export function scoreScenario(scenario: ScenarioDoc): number {
  return ORDINAL_SCORE[scenario.impact] * ORDINAL_SCORE[scenario.likelihood];
}

/** Scenario ids by descending score, ties by id ascending (the server's rank order). */
export function rankScenarios(scenarios: ScenarioDoc[]): string[] {
  return scenarios
    .map((s) => ({ id: s.id, score: scoreScenario(s) }))
    .sort((a, b) => (b.score - a.score) || (a.id < b.id ? -1 : a.id > b.id ? 1 : 0))
    .map((entry) => entry.id);
}

// --- band geometry ---------------------------------------------------------

export const BAND_HEIGHT = 180;
export const BAND_COUNT = 3;
export const CANVAS_HEIGHT = BAND_HEIGHT * BAND_COUNT;
export const NODE_MARGIN = 30;

export interface Band {
  top: number;
  bottom: number;
}

/** Vertical extent of a layer band; ordinal 0 is the top band. */
export function bandForLayer(ordinal: number): Band {
  const top = ordinal * BAND_HEIGHT;
  return { top, bottom: top + BAND_HEIGHT };
}

/** Clamp a y-coordinate so the node stays inside its layer's band. */
export function clampToBand(y: number, ordinal: number): number {
  const band = bandForLayer(ordinal);
  return Math.min(Math.max(y, band.top + NODE_MARGIN), band.bottom - NODE_MARGIN);
}

/** Layer ordinal of a factor path, from its first segment. */
export function layerOrdinalOf(taxonomy: TaxonomyDoc, factorPath: string): number {
  const layerId = factorPath.split(".")[0];
  const layer = taxonomy.layers.find((l) => l.id === layerId);
  return layer ? layer.ordinal : 0;
}

/** Default stage when dropping into a band; always overridable by the user. */
export function defaultStageForLayer(ordinal: number): Stage {
  if (ordinal <= 0) return "prevention";
  if (ordinal === 1) return "detection";
  return "response";
}

// --- layout ----------------------------------------------------------------

export interface Position {
  x: number;
  y: number;
}

const COLUMN_X0 = 110;
const COLUMN_SPACING = 150;
const STACK_SPACING = 56;

/** Longest-path depth per node; nodes on cycles fall back to listed order. */
function depths(scenario: ScenarioDoc): Map<string, number> {
  const ids = scenario.nodes.map((n) => n.id);
  const indegree = new Map(ids.map((id) => [id, 0]));
  const out = new Map<string, string[]>(ids.map((id) => [id, []]));
  for (const edge of scenario.edges) {
    out.get(edge.from)?.push(edge.to);
    indegree.set(edge.to, (indegree.get(edge.to) ?? 0) + 1);
  }
  const depth = new Map(ids.map((id) => [id, 0]));
  const queue = ids.filter((id) => indegree.get(id) === 0);
  const seen: string[] = [];
  while (queue.length > 0) {
    const id = queue.shift()!;
    seen.push(id);
    for (const next of out.get(id) ?? []) {
      depth.set(next, Math.max(depth.get(next) ?? 0, (depth.get(id) ?? 0) + 1));
      const remaining = (indegree.get(next) ?? 0) - 1;
      indegree.set(next, remaining);
      if (remaining === 0) queue.push(next);
    }
  }
  let fallback = seen.length;
  for (const id of ids) {
    if (!seen.includes(id)) depth.set(id, fallback++);
  }
  return depth;
}

/** Deterministic initial positions: columns by chain depth, rows inside bands. */
export function autoLayout(scenario: ScenarioDoc, taxonomy: TaxonomyDoc): Record<string, Position> {
  const depth = depths(scenario);
  const stacks = new Map<string, string[]>();
  const bandOf = new Map<string, number>();
  for (const node of scenario.nodes) {
    const band = layerOrdinalOf(taxonomy, node.factor);
    bandOf.set(node.id, band);
    const key = `${band}:${depth.get(node.id) ?? 0}`;
    const stack = stacks.get(key) ?? [];
    stack.push(node.id);
    stacks.set(key, stack);
  }
  const positions: Record<string, Position> = {};
  for (const stack of stacks.values()) {
    stack.forEach((id, index) => {
      const band = bandForLayer(bandOf.get(id) ?? 0);
      const center = (band.top + band.bottom) / 2;
      const offset = (index - (stack.length - 1) / 2) * STACK_SPACING;
      positions[id] = {
        x: COLUMN_X0 + (depth.get(id) ?? 0) * COLUMN_SPACING,
        y: clampToBand(center + offset, bandOf.get(id) ?? 0),
      };
    });
  }
  return positions;
}

// --- gesture building blocks -------------------------------------------------

/** A node id for a dropped factor that does not collide with existing ids. */
export function freshNodeId(scenario: ScenarioDoc, factorId: string): string {
  const taken = new Set(scenario.nodes.map((n) => n.id));
  if (!taken.has(factorId)) return factorId;
  let i = 2;
  while (taken.has(`${factorId}_${i}`)) i += 1;
  return `${factorId}_${i}`;
}

/** Removal batch for a node: its controls and edges first, then the node. */
export function cascadeDelete(scenario: ScenarioDoc, nodeId: string): EditOp[] {
  const ops: EditOp[] = [];
  for (const control of scenario.controls) {
    if (control.target === nodeId) {
      ops.push({ op: "remove_control", scenario: scenario.id, control: control.id });
    }
  }
  for (const edge of scenario.edges) {
    if (edge.from === nodeId || edge.to === nodeId) {
      ops.push({ op: "remove_edge", scenario: scenario.id, edge: { from: edge.from, to: edge.to } });
    }
  }
  ops.push({ op: "remove_node", scenario: scenario.id, node: nodeId });
  return ops;
}

// --- what-if state -----------------------------------------------------------

/** Pending hypothetical statuses; never applied to the server model. */
export type WhatIfOverrides = Readonly<Record<string, ControlStatus>>;

export function withOverride(
  overrides: WhatIfOverrides,
  controlId: string,
  status: ControlStatus,
): WhatIfOverrides {
  return { ...overrides, [controlId]: status };
}

export function withoutOverride(overrides: WhatIfOverrides, controlId: string): WhatIfOverrides {
  const next = { ...overrides };
  delete next[controlId];
  return next;
}

/** Edit batch that persists the pending overrides. */
export function commitBatch(scenarioId: string, overrides: WhatIfOverrides): EditOp[] {
  return Object.keys(overrides)
    .sort()
    .map((controlId) => ({
      op: "set_control_status",
      scenario: scenarioId,
      control: controlId,
      status: overrides[controlId],
    }));
}

/** Node ids the canvas should highlight for a report. */
export function highlightSet(report: CoverageReportDoc | null): Set<string> {
  return new Set(report ? report.min_cut_example : []);
}
