import { describe, expect, it } from "vitest";

import {
  BAND_HEIGHT,
  NODE_MARGIN,
  ORDINAL_SCORE,
  autoLayout,
  bandForLayer,
  cascadeDelete,
  clampToBand,
  commitBatch,
  defaultStageForLayer,
  freshNodeId,
  highlightSet,
  layerOrdinalOf,
  rankScenarios,
  scoreScenario,
  withOverride,
  withoutOverride,
} from "../src/state.js";
import type { CoverageReportDoc, ScenarioDoc, TaxonomyDoc } from "../src/types.js";

const TAXONOMY: TaxonomyDoc = {
  layers: [
    {
      id: "ai_system",
      name: "AI system",
      ordinal: 0,
      components: [
        {
          id: "data",
          name: "Data",
          factors: [{ id: "data_balance", name: "Data balance", description: "Impact of data bias" }],
        },
      ],
    },
    {
      id: "service_provider",
      name: "Service provider",
      ordinal: 1,
      components: [
        {
          id: "communication",
          name: "Communication",
          factors: [{ id: "consensus", name: "Consensus", description: "" }],
        },
      ],
    },
    {
      id: "users",
      name: "Users",
      ordinal: 2,
      components: [
        {
          id: "usage",
          name: "Usage",
          factors: [{ id: "proper_use", name: "Proper use", description: "" }],
        },
      ],
    },
  ],
};

function scenario(partial: Partial<ScenarioDoc>): ScenarioDoc {
  return {
    id: "R001",
    title: "t",
    impact: "high",
    likelihood: "high",
    references: [],
    nodes: [],
    edges: [],
    controls: [],
    ...partial,
  };
}

describe("ranking", () => {
  it("multiplies ordinal scores", () => {
    expect(ORDINAL_SCORE.low).toBe(1);
    expect(scoreScenario(scenario({ impact: "high", likelihood: "medium" }))).toBe(6);
  });

  it("orders by score descending, ties by id", () => {
    const list = [
      scenario({ id: "R3", impact: "low", likelihood: "low" }),
      scenario({ id: "R2", impact: "high", likelihood: "medium" }),
      scenario({ id: "R1", impact: "medium", likelihood: "high" }),
      scenario({ id: "R0", impact: "high", likelihood: "high" }),
    ];
    expect(rankScenarios(list)).toEqual(["R0", "R1", "R2", "R3"]);
  });
});

describe("band geometry", () => {
  it("stacks bands by ordinal", () => {
    expect(bandForLayer(0)).toEqual({ top: 0, bottom: BAND_HEIGHT });
    expect(bandForLayer(2)).toEqual({ top: 2 * BAND_HEIGHT, bottom: 3 * BAND_HEIGHT });
  });

  it("clamps y into the band with a margin", () => {
    const band = bandForLayer(1);
    expect(clampToBand(band.top - 500, 1)).toBe(band.top + NODE_MARGIN);
    expect(clampToBand(band.bottom + 500, 1)).toBe(band.bottom - NODE_MARGIN);
    expect(clampToBand(band.top + 70, 1)).toBe(band.top + 70);
  });

  it("resolves a factor's layer from its path", () => {
    expect(layerOrdinalOf(TAXONOMY, "users.usage.proper_use")).toBe(2);
    expect(layerOrdinalOf(TAXONOMY, "ai_system.data.data_balance")).toBe(0);
    expect(layerOrdinalOf(TAXONOMY, "nowhere.x.y")).toBe(0);
  });

  it("defaults stage by band", () => {
    expect(defaultStageForLayer(0)).toBe("prevention");
    expect(defaultStageForLayer(1)).toBe("detection");
    expect(defaultStageForLayer(2)).toBe("response");
  });
});

describe("autoLayout", () => {
  const chain = scenario({
    nodes: [
      { id: "a", factor: "ai_system.data.data_balance", stage: "prevention", note: null },
      { id: "b", factor: "service_provider.communication.consensus", stage: "detection", note: null },
      { id: "c", factor: "users.usage.proper_use", stage: "response", note: null },
    ],
    edges: [
      { from: "a", to: "b" },
      { from: "b", to: "c" },
    ],
  });

  it("advances x along the chain and keeps y in band", () => {
    const positions = autoLayout(chain, TAXONOMY);
    expect(positions.a.x).toBeLessThan(positions.b.x);
    expect(positions.b.x).toBeLessThan(positions.c.x);
    for (const [id, ordinal] of [["a", 0], ["b", 1], ["c", 2]] as const) {
      const band = bandForLayer(ordinal);
      expect(positions[id].y).toBeGreaterThanOrEqual(band.top + NODE_MARGIN);
      expect(positions[id].y).toBeLessThanOrEqual(band.bottom - NODE_MARGIN);
    }
  });

  it("separates stacked nodes inside one band", () => {
    const stacked = scenario({
      nodes: [
        { id: "a", factor: "ai_system.data.data_balance", stage: "prevention", note: null },
        { id: "b", factor: "ai_system.data.data_balance", stage: "prevention", note: null },
      ],
    });
    const positions = autoLayout(stacked, TAXONOMY);
    expect(positions.a.y).not.toBe(positions.b.y);
    const band = bandForLayer(0);
    for (const id of ["a", "b"]) {
      expect(positions[id].y).toBeGreaterThanOrEqual(band.top + NODE_MARGIN);
      expect(positions[id].y).toBeLessThanOrEqual(band.bottom - NODE_MARGIN);
    }
  });

  it("is deterministic", () => {
    expect(autoLayout(chain, TAXONOMY)).toEqual(autoLayout(chain, TAXONOMY));
  });

  it("still places every node when the edges form a cycle", () => {
    const cyclic = scenario({
      nodes: [
        { id: "a", factor: "ai_system.data.data_balance", stage: "prevention", note: null },
        { id: "b", factor: "ai_system.data.data_balance", stage: "detection", note: null },
      ],
      edges: [
        { from: "a", to: "b" },
        { from: "b", to: "a" },
      ],
    });
    const positions = autoLayout(cyclic, TAXONOMY);
    expect(Object.keys(positions).sort()).toEqual(["a", "b"]);
  });
});

describe("gesture batches", () => {
  it("picks a fresh node id on collision", () => {
    const s = scenario({
      nodes: [
        { id: "consensus", factor: "service_provider.communication.consensus", stage: "detection", note: null },
        { id: "consensus_2", factor: "service_provider.communication.consensus", stage: "detection", note: null },
      ],
    });
    expect(freshNodeId(s, "consensus")).toBe("consensus_3");
    expect(freshNodeId(s, "data_balance")).toBe("data_balance");
  });

  it("cascades deletes: controls, then edges, then the node", () => {
    const s = scenario({
      nodes: [
        { id: "a", factor: "ai_system.data.data_balance", stage: "prevention", note: null },
        { id: "b", factor: "service_provider.communication.consensus", stage: "detection", note: null },
        { id: "c", factor: "users.usage.proper_use", stage: "response", note: null },
      ],
      edges: [
        { from: "a", to: "b" },
        { from: "b", to: "c" },
      ],
      controls: [
        { id: "k1", target: "b", description: "", status: "proposed" },
        { id: "k2", target: "a", description: "", status: "proposed" },
      ],
    });
    expect(cascadeDelete(s, "b")).toEqual([
      { op: "remove_control", scenario: "R001", control: "k1" },
      { op: "remove_edge", scenario: "R001", edge: { from: "a", to: "b" } },
      { op: "remove_edge", scenario: "R001", edge: { from: "b", to: "c" } },
      { op: "remove_node", scenario: "R001", node: "b" },
    ]);
  });
});

describe("what-if overrides", () => {
  it("adds and removes without mutating", () => {
    const base = withOverride({}, "c1", "implemented");
    const more = withOverride(base, "c2", "planned");
    expect(base).toEqual({ c1: "implemented" });
    expect(more).toEqual({ c1: "implemented", c2: "planned" });
    expect(withoutOverride(more, "c1")).toEqual({ c2: "planned" });
    expect(more).toEqual({ c1: "implemented", c2: "planned" });
  });

  it("commits as sorted set_control_status ops", () => {
    const ops = commitBatch("R001", { c_z: "implemented", c_a: "planned" });
    expect(ops).toEqual([
      { op: "set_control_status", scenario: "R001", control: "c_a", status: "planned" },
      { op: "set_control_status", scenario: "R001", control: "c_z", status: "implemented" },
    ]);
  });

  it("highlights the reported min cut", () => {
    expect(highlightSet(null).size).toBe(0);
    const report = { min_cut_example: ["consensus"] } as CoverageReportDoc;
    expect(highlightSet(report)).toEqual(new Set(["consensus"]));
  });
});
