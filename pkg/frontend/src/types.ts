/** Wire types mirroring the service JSON, field for field. */

export type Stage = "prevention" | "detection" | "response";
export type ControlStatus = "proposed" | "planned" | "implemented" | "rejected";
export type Ordinal = "low" | "medium" | "high";

export interface FactorDoc {
  id: string;
  name: string;
  description: string;
}

export interface ComponentDoc {
  id: string;
  name: string;
  factors: FactorDoc[];
}

export interface LayerDoc {
  id: string;
  name: string;
  ordinal: number;
  components: ComponentDoc[];
}

export interface TaxonomyDoc {
  layers: LayerDoc[];
}

export interface AttributeDoc {
  key: string;
  value: string;
}

export interface NodeDoc {
  id: string;
  factor: string;
  stage: Stage;
  note: string | null;
}

export interface EdgeDoc {
  from: string;
  to: string;
}

export interface ControlDoc {
  id: string;
  target: string;
  description: string;
  status: ControlStatus;
}

export interface ScenarioDoc {
  id: string;
  title: string;
  impact: Ordinal;
  likelihood: Ordinal;
  references: string[];
  nodes: NodeDoc[];
  edges: EdgeDoc[];
  controls: ControlDoc[];
}

export interface ModelDoc {
  profile: { name: string; attributes: AttributeDoc[] };
  taxonomy: string;
  scenarios: ScenarioDoc[];
}

export interface CoverageReportDoc {
  scenario: string;
  statuses: string[];
  sources: string[];
  sinks: string[];
  path_count: number;
  capped: boolean;
  uncut_paths: string[][];
  min_defense_depth: number;
  min_cut_size: number;
  min_cut_example: string[];
  per_node: Record<string, number>;
}

export interface DiagnosticDoc {
  severity: string;
  code: string;
  message: string;
  location: string | null;
  line?: number;
  column?: number;
}

export interface AnalyzeRequest {
  scenario: string;
  statuses?: ControlStatus[];
  overrides?: Record<string, ControlStatus>;
}

/** One operation of a POST /api/edits batch. */
export type EditOp =
  | { op: "add_scenario"; scenario: ScenarioDoc }
  | { op: "remove_scenario"; scenario: string }
  | {
      op: "update_scenario";
      scenario: string;
      title?: string;
      impact?: Ordinal;
      likelihood?: Ordinal;
      references?: string[];
    }
  | { op: "add_node"; scenario: string; node: NodeDoc }
  | { op: "remove_node"; scenario: string; node: string }
  | {
      op: "update_node";
      scenario: string;
      node: string;
      factor?: string;
      stage?: Stage;
      note?: string | null;
    }
  | { op: "add_edge"; scenario: string; edge: EdgeDoc }
  | { op: "remove_edge"; scenario: string; edge: EdgeDoc }
  | { op: "add_control"; scenario: string; control: ControlDoc }
  | { op: "remove_control"; scenario: string; control: string }
  | {
      op: "update_control";
      scenario: string;
      control: string;
      target?: string;
      description?: string;
      status?: ControlStatus;
    }
  | { op: "set_control_status"; scenario: string; control: string; status: ControlStatus };
