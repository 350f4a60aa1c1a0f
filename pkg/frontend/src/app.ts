/** Browser shell around the session controller.
 *
 * Renders the taxonomy palette, the ranked scenario list, the banded
 * chain canvas, and the what-if panel. All state lives in the Session;
 * this module only translates DOM events into controller calls and
 * redraws from the controller's snapshot.
 */

import type { Session } from "./controller.js";
import type { ControlStatus, DiagnosticDoc, Ordinal, ScenarioDoc, Stage } from "./types.js";
import { BAND_HEIGHT, CANVAS_HEIGHT, bandForLayer, scoreScenario } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const CANVAS_WIDTH = 1800;
const NODE_W = 128;
const NODE_H = 44;
const STATUSES: ControlStatus[] = ["proposed", "planned", "implemented", "rejected"];
const ORDINALS: Ordinal[] = ["low", "medium", "high"];
const STAGES: Stage[] = ["prevention", "detection", "response"];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  for (const child of children) node.append(child);
  return node;
}

function svg(tag: string, attrs: Record<string, string> = {}): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

interface DragState {
  nodeId: string;
  dx: number;
  dy: number;
}

export class App {
  private session: Session;
  private root: HTMLElement;
  private banner: HTMLElement;
  private palette: HTMLElement;
  private scenarioList: HTMLElement;
  private canvasHost: HTMLElement;
  private panel: HTMLElement;
  private stagePick: HTMLSelectElement;
  private drag: DragState | null = null;
  private connectFrom: string | null = null;
  private connectMode = false;

  constructor(root: HTMLElement, session: Session) {
    this.root = root;
    this.session = session;
    this.banner = el("div", { class: "banner hidden" });
    this.palette = el("aside", { class: "palette" });
    this.scenarioList = el("nav", { class: "scenarios" });
    this.canvasHost = el("section", { class: "canvas-host" });
    this.panel = el("aside", { class: "panel" });
    this.stagePick = el("select", { class: "stage-pick", title: "stage for new nodes" });
  }

  async start(): Promise<void> {
    await this.session.load();
    this.root.append(
      this.banner,
      el("div", { class: "columns" }, [this.palette, el("main", {}, [this.scenarioList, this.canvasHost]), this.panel]),
    );
    this.renderPalette();
    this.render();
    document.addEventListener("mousemove", (event) => this.onDragMove(event));
    document.addEventListener("mouseup", () => this.onDragEnd());
  }

  /** Redraw everything that depends on session state. */
  render(): void {
    this.renderScenarios();
    this.renderCanvas();
    this.renderPanel();
    this.renderStale();
  }

  private showDiagnostics(diagnostics: DiagnosticDoc[]): void {
    if (diagnostics.length === 0) {
      this.banner.classList.add("hidden");
      this.banner.replaceChildren();
      return;
    }
    this.banner.classList.remove("hidden");
    this.banner.replaceChildren(
      ...diagnostics.map((d) =>
        el("div", { class: "diagnostic" }, [`${d.severity} [${d.code}] ${d.message}${d.location ? ` (${d.location})` : ""}`]),
      ),
    );
  }

  private async run(action: () => Promise<{ ok: boolean; diagnostics: DiagnosticDoc[] }>): Promise<void> {
    try {
      const result = await action();
      this.showDiagnostics(result.diagnostics);
    } catch (err) {
      this.showDiagnostics([
        { severity: "error", code: "request-failed", message: String(err), location: null },
      ]);
    }
    this.render();
  }

  // --- palette ---------------------------------------------------------------

  private renderPalette(): void {
    const taxonomy = this.session.taxonomy;
    if (taxonomy === null) return;
    this.stagePick.replaceChildren(
      el("option", { value: "" }, ["stage: auto"]),
      ...STAGES.map((s) => el("option", { value: s }, [s])),
    );
    const groups = [...taxonomy.layers]
      .sort((a, b) => a.ordinal - b.ordinal)
      .map((layer) =>
        el("section", { class: "palette-layer" }, [
          el("h3", {}, [layer.name]),
          ...layer.components.map((component) =>
            el("div", { class: "palette-component" }, [
              el("h4", {}, [component.name]),
              ...component.factors.map((factor) => {
                const path = `${layer.id}.${component.id}.${factor.id}`;
                const item = el("button", { class: "factor", title: factor.description }, [factor.name]);
                item.addEventListener("click", () => {
                  const stage = this.stagePick.value === "" ? undefined : (this.stagePick.value as Stage);
                  void this.run(() => this.session.dropFactor(path, 110, stage));
                });
                return item;
              }),
            ]),
          ),
        ]),
      );
    this.palette.replaceChildren(el("h2", {}, ["Factors"]), this.stagePick, ...groups);
  }

  // --- scenario list ------------------------------------------------------------

  private renderScenarios(): void {
    const model = this.session.model;
    if (model === null) return;
    const byId = new Map(model.scenarios.map((s) => [s.id, s]));
    const items = this.session.ranking().map((id) => {
      const scenario = byId.get(id) as ScenarioDoc;
      const item = el(
        "button",
        { class: `scenario${id === this.session.selected ? " selected" : ""}` },
        [el("span", { class: "scenario-id" }, [id]), ` ${scenario.title} `, el("span", { class: "score" }, [String(scoreScenario(scenario))])],
      );
      item.addEventListener("click", () => {
        void this.session.select(id).then(() => this.render());
      });
      return item;
    });
    const form = this.newScenarioForm();
    this.scenarioList.replaceChildren(el("h2", {}, ["Scenarios"]), ...items, form);
  }

  private newScenarioForm(): HTMLElement {
    const id = el("input", { placeholder: "id", size: "6" });
    const title = el("input", { placeholder: "title", size: "18" });
    const impact = el("select", {}, ORDINALS.map((o) => el("option", { value: o }, [o])));
    const likelihood = el("select", {}, ORDINALS.map((o) => el("option", { value: o }, [o])));
    const add = el("button", {}, ["add scenario"]);
    add.addEventListener("click", () => {
      if (id.value.trim() === "" || title.value.trim() === "") return;
      void this.run(() =>
        this.session.applyEdits([
          {
            op: "add_scenario",
            scenario: {
              id: id.value.trim(),
              title: title.value.trim(),
              impact: impact.value as Ordinal,
              likelihood: likelihood.value as Ordinal,
              references: [],
              nodes: [],
              edges: [],
              controls: [],
            },
          },
        ]),
      );
    });
    return el("div", { class: "new-scenario" }, [id, title, impact, likelihood, add]);
  }

  // --- canvas ----------------------------------------------------------------------

  private renderCanvas(): void {
    const scenario = this.session.scenario();
    const taxonomy = this.session.taxonomy;
    if (scenario === null || taxonomy === null) {
      this.canvasHost.replaceChildren(el("p", { class: "empty" }, ["No scenario selected."]));
      return;
    }
    const positions = this.session.layout();
    const highlighted = this.session.highlighted();
    const canvas = svg("svg", {
      class: "canvas",
      viewBox: `0 0 ${CANVAS_WIDTH} ${CANVAS_HEIGHT}`,
      width: String(CANVAS_WIDTH),
      height: String(CANVAS_HEIGHT),
    });

    const layers = [...taxonomy.layers].sort((a, b) => a.ordinal - b.ordinal);
    for (const layer of layers) {
      const band = bandForLayer(layer.ordinal);
      const rect = svg("rect", {
        class: `band band-${layer.ordinal}`,
        x: "0",
        y: String(band.top),
        width: String(CANVAS_WIDTH),
        height: String(BAND_HEIGHT),
      });
      const label = svg("text", { class: "band-label", x: "12", y: String(band.top + 24) });
      label.textContent = layer.name;
      canvas.append(rect, label);
    }

    for (const edge of scenario.edges) {
      const from = positions[edge.from];
      const to = positions[edge.to];
      if (from === undefined || to === undefined) continue;
      canvas.append(
        svg("line", {
          class: "edge",
          x1: String(from.x),
          y1: String(from.y),
          x2: String(to.x),
          y2: String(to.y),
          "marker-end": "url(#arrow)",
        }),
      );
    }
    const defs = svg("defs");
    const marker = svg("marker", {
      id: "arrow",
      viewBox: "0 0 10 10",
      refX: "9",
      refY: "5",
      markerWidth: "7",
      markerHeight: "7",
      orient: "auto-start-reverse",
    });
    marker.append(svg("path", { d: "M 0 0 L 10 5 L 0 10 z", class: "arrow-head" }));
    defs.append(marker);
    canvas.append(defs);

    for (const node of scenario.nodes) {
      const pos = positions[node.id];
      if (pos === undefined) continue;
      const group = svg("g", {
        class: `node stage-${node.stage}${highlighted.has(node.id) ? " cut" : ""}${
          this.connectFrom === node.id ? " connect-from" : ""
        }`,
        transform: `translate(${pos.x}, ${pos.y})`,
        "data-node": node.id,
      });
      group.append(
        svg("rect", {
          x: String(-NODE_W / 2),
          y: String(-NODE_H / 2),
          width: String(NODE_W),
          height: String(NODE_H),
          rx: "7",
        }),
      );
      const label = svg("text", { class: "node-label", y: "-2" });
      label.textContent = node.id;
      const stage = svg("text", { class: "node-stage", y: "14" });
      stage.textContent = node.stage;
      group.append(label, stage);
      group.addEventListener("mousedown", (event) => this.onNodeDown(event as MouseEvent, node.id, pos.x, pos.y));
      group.addEventListener("click", (event) => this.onNodeClick(event as MouseEvent, node.id));
      canvas.append(group);
    }

    const connect = el("button", { class: `mode${this.connectMode ? " active" : ""}` }, [
      this.connectMode ? "connecting: pick source, then target" : "connect nodes",
    ]);
    connect.addEventListener("click", () => {
      this.connectMode = !this.connectMode;
      this.connectFrom = null;
      this.render();
    });
    const hint = el("span", { class: "hint" }, ["drag to move inside a band, shift-click to delete"]);
    this.canvasHost.replaceChildren(el("div", { class: "canvas-bar" }, [connect, hint]), canvas);
  }

  private onNodeDown(event: MouseEvent, nodeId: string, x: number, y: number): void {
    if (this.connectMode) return;
    const point = this.canvasPoint(event);
    this.drag = { nodeId, dx: x - point.x, dy: y - point.y };
    event.preventDefault();
  }

  private onDragMove(event: MouseEvent): void {
    if (this.drag === null) return;
    const point = this.canvasPoint(event);
    this.session.moveNode(this.drag.nodeId, point.x + this.drag.dx, point.y + this.drag.dy);
    const group = this.canvasHost.querySelector(`[data-node="${this.drag.nodeId}"]`);
    const pos = this.session.layout()[this.drag.nodeId];
    if (group !== null && pos !== undefined) group.setAttribute("transform", `translate(${pos.x}, ${pos.y})`);
    this.redrawEdges();
  }

  private onDragEnd(): void {
    this.drag = null;
  }

  private redrawEdges(): void {
    const scenario = this.session.scenario();
    if (scenario === null) return;
    const positions = this.session.layout();
    const lines = this.canvasHost.querySelectorAll("line.edge");
    scenario.edges.forEach((edge, index) => {
      const line = lines[index];
      const from = positions[edge.from];
      const to = positions[edge.to];
      if (line === undefined || from === undefined || to === undefined) return;
      line.setAttribute("x1", String(from.x));
      line.setAttribute("y1", String(from.y));
      line.setAttribute("x2", String(to.x));
      line.setAttribute("y2", String(to.y));
    });
  }

  private onNodeClick(event: MouseEvent, nodeId: string): void {
    if (event.shiftKey) {
      void this.run(() => this.session.deleteNode(nodeId));
      return;
    }
    if (!this.connectMode) return;
    if (this.connectFrom === null) {
      this.connectFrom = nodeId;
      this.render();
      return;
    }
    const from = this.connectFrom;
    this.connectFrom = null;
    this.connectMode = false;
    void this.run(() => this.session.connect(from, nodeId));
  }

  private canvasPoint(event: MouseEvent): { x: number; y: number } {
    const canvas = this.canvasHost.querySelector("svg.canvas");
    if (canvas === null) return { x: event.clientX, y: event.clientY };
    const rect = canvas.getBoundingClientRect();
    const scaleX = CANVAS_WIDTH / rect.width;
    const scaleY = CANVAS_HEIGHT / rect.height;
    return { x: (event.clientX - rect.left) * scaleX, y: (event.clientY - rect.top) * scaleY };
  }

  // --- what-if panel -------------------------------------------------------------------

  private renderPanel(): void {
    const scenario = this.session.scenario();
    const report = this.session.report;
    if (scenario === null) {
      this.panel.replaceChildren();
      return;
    }
    const rows = scenario.controls.map((control) => {
      const overridden = control.id in this.session.overrides;
      const effective = this.session.overrides[control.id] ?? control.status;
      const pick = el(
        "select",
        {},
        STATUSES.map((status) =>
          el("option", { value: status, ...(status === effective ? { selected: "" } : {}) }, [status]),
        ),
      );
      pick.addEventListener("change", () => {
        const status = pick.value as ControlStatus;
        const action =
          status === control.status
            ? this.session.clearOverride(control.id)
            : this.session.setOverride(control.id, status);
        void action.then(() => this.render());
      });
      return el("div", { class: `control${overridden ? " overridden" : ""}` }, [
        el("span", { class: "control-id" }, [control.id]),
        el("span", { class: "control-target" }, [`@ ${control.target}`]),
        pick,
        el("p", { class: "control-desc" }, [control.description]),
      ]);
    });

    const summary =
      report === null
        ? el("p", { class: "empty" }, ["No analysis yet."])
        : el("dl", { class: "report" }, [
            el("dt", {}, ["uncut paths"]),
            el("dd", { id: "uncut-count" }, [String(report.uncut_paths.length)]),
            el("dt", {}, ["min defense depth"]),
            el("dd", { id: "depth" }, [String(report.min_defense_depth)]),
            el("dt", {}, ["min cut size"]),
            el("dd", { id: "cut-size" }, [String(report.min_cut_size)]),
            el("dt", {}, ["min cut"]),
            el("dd", { id: "cut-example" }, [report.min_cut_example.join(", ") || "(empty)"]),
          ]);

    const commit = el("button", { class: "commit" }, ["commit what-if"]);
    commit.addEventListener("click", () => void this.run(() => this.session.commitWhatIf()));
    const discard = el("button", { class: "discard" }, ["discard"]);
    discard.addEventListener("click", () => {
      void this.session.discardWhatIf().then(() => this.render());
    });
    const pending = this.session.hasPendingWhatIf();
    this.panel.replaceChildren(
      el("h2", {}, ["Coverage"]),
      summary,
      el("h2", {}, [`Controls${pending ? " (what-if pending)" : ""}`]),
      ...rows,
      el("div", { class: `actions${pending ? "" : " hidden"}` }, [commit, discard]),
    );
  }

  private renderStale(): void {
    const existing = this.root.querySelector(".stale");
    if (existing !== null) existing.remove();
    if (!this.session.stale) return;
    const resync = el("button", {}, ["reload model"]);
    resync.addEventListener("click", () => {
      void this.session.resync().then(() => this.render());
    });
    const note = el("div", { class: "stale" }, [
      "The model changed on the server since this page loaded. ",
      resync,
    ]);
    this.root.prepend(note);
  }
}
