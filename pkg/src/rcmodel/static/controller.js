/** DOM-free session controller.
 *
 * Owns the loaded model, the selected scenario, client-local node
 * positions, and the pending what-if overrides. Every mutation goes
 * through the server as an edit batch; a rejected batch leaves the
 * session untouched. Coverage numbers always come from the analyze
 * endpoint, never from local computation.
 */
import { ApiError } from "./api.js";
import { autoLayout, bandForLayer, cascadeDelete, clampToBand, commitBatch, defaultStageForLayer, freshNodeId, highlightSet, layerOrdinalOf, rankScenarios, withOverride, withoutOverride, } from "./state.js";
export class Session {
    constructor(client) {
        this.taxonomy = null;
        this.model = null;
        this.selected = null;
        this.report = null;
        this.overrides = {};
        this.positions = new Map();
        /** Revision the loaded model reflects; differing responses mean another writer. */
        this.modelRevision = null;
        this.stale = false;
        this.client = client;
    }
    async load() {
        this.taxonomy = await this.client.taxonomy();
        this.syncModel(await this.client.model());
        const ranked = this.ranking();
        this.selected = ranked.length > 0 ? ranked[0] : null;
        this.report = null;
        this.overrides = {};
        if (this.selected !== null)
            await this.refreshAnalysis();
    }
    ranking() {
        return this.model ? rankScenarios(this.model.scenarios) : [];
    }
    scenario() {
        if (this.model === null || this.selected === null)
            return null;
        return this.model.scenarios.find((s) => s.id === this.selected) ?? null;
    }
    async select(id) {
        this.selected = id;
        this.overrides = {};
        this.report = null;
        await this.refreshAnalysis();
    }
    /** Re-run coverage for the selection, honoring pending overrides. */
    async refreshAnalysis() {
        if (this.selected === null)
            return;
        const body = {
            scenario: this.selected,
        };
        if (Object.keys(this.overrides).length > 0)
            body.overrides = { ...this.overrides };
        this.report = await this.client.analyze(body);
        this.checkRevision();
    }
    highlighted() {
        return highlightSet(this.report);
    }
    // --- what-if ---------------------------------------------------------------
    async setOverride(controlId, status) {
        this.overrides = withOverride(this.overrides, controlId, status);
        await this.refreshAnalysis();
    }
    async clearOverride(controlId) {
        this.overrides = withoutOverride(this.overrides, controlId);
        await this.refreshAnalysis();
    }
    hasPendingWhatIf() {
        return Object.keys(this.overrides).length > 0;
    }
    /** Persist the pending overrides as control-status edits. */
    async commitWhatIf() {
        if (this.selected === null || !this.hasPendingWhatIf())
            return { ok: true, diagnostics: [] };
        const result = await this.applyEdits(commitBatch(this.selected, this.overrides));
        if (result.ok) {
            this.overrides = {};
            await this.refreshAnalysis();
        }
        return result;
    }
    /** Drop the hypothesis and show the saved model's numbers again. */
    async discardWhatIf() {
        this.overrides = {};
        await this.refreshAnalysis();
    }
    // --- persistent edits --------------------------------------------------------
    /** Send a batch; a 422 reports diagnostics and changes nothing here. */
    async applyEdits(ops) {
        try {
            const { model } = await this.client.edits(ops);
            this.syncModel(model);
            return { ok: true, diagnostics: [] };
        }
        catch (err) {
            if (err instanceof ApiError && err.status === 422) {
                return { ok: false, diagnostics: err.diagnostics };
            }
            throw err;
        }
    }
    /** Add a node for a palette factor, defaulting stage from its layer band. */
    async dropFactor(factorPath, x, stage) {
        const scenario = this.scenario();
        if (scenario === null || this.taxonomy === null)
            return { ok: true, diagnostics: [] };
        const ordinal = layerOrdinalOf(this.taxonomy, factorPath);
        const id = freshNodeId(scenario, factorPath.split(".").pop() ?? "node");
        const result = await this.applyEdits([
            {
                op: "add_node",
                scenario: scenario.id,
                node: { id, factor: factorPath, stage: stage ?? defaultStageForLayer(ordinal), note: null },
            },
        ]);
        if (result.ok)
            this.placeNode(scenario.id, id, x, ordinal);
        return result;
    }
    async connect(from, to) {
        const scenario = this.scenario();
        if (scenario === null)
            return { ok: true, diagnostics: [] };
        if (from === to) {
            return {
                ok: false,
                diagnostics: [
                    {
                        severity: "error",
                        code: "self-loop",
                        message: "an edge cannot connect a node to itself",
                        location: `${scenario.id}/${from}`,
                    },
                ],
            };
        }
        return this.applyEdits([{ op: "add_edge", scenario: scenario.id, edge: { from, to } }]);
    }
    async deleteNode(nodeId) {
        const scenario = this.scenario();
        if (scenario === null)
            return { ok: true, diagnostics: [] };
        return this.applyEdits(cascadeDelete(scenario, nodeId));
    }
    // --- positions -----------------------------------------------------------------
    /** Positions for the selected scenario, laying out on first access. */
    layout() {
        const scenario = this.scenario();
        if (scenario === null || this.taxonomy === null)
            return {};
        let positions = this.positions.get(scenario.id);
        if (positions === undefined) {
            positions = autoLayout(scenario, this.taxonomy);
            this.positions.set(scenario.id, positions);
        }
        for (const node of scenario.nodes) {
            if (!(node.id in positions)) {
                const ordinal = layerOrdinalOf(this.taxonomy, node.factor);
                positions[node.id] = { x: 110, y: clampToBand(0, ordinal) };
            }
        }
        return positions;
    }
    moveNode(nodeId, x, y) {
        const scenario = this.scenario();
        if (scenario === null || this.taxonomy === null)
            return;
        const node = scenario.nodes.find((n) => n.id === nodeId);
        if (node === undefined)
            return;
        const ordinal = layerOrdinalOf(this.taxonomy, node.factor);
        this.layout()[nodeId] = { x, y: clampToBand(y, ordinal) };
    }
    placeNode(scenarioId, nodeId, x, ordinal) {
        const positions = this.positions.get(scenarioId);
        if (positions !== undefined) {
            const band = bandForLayer(ordinal);
            positions[nodeId] = { x, y: clampToBand((band.top + band.bottom) / 2, ordinal) };
        }
    }
    // --- revision tracking -------------------------------------------------------------
    syncModel(model) {
        this.model = model;
        this.modelRevision = this.client.revision;
        this.stale = false;
        // prune positions for scenarios that no longer exist
        const ids = new Set(model.scenarios.map((s) => s.id));
        for (const key of [...this.positions.keys()]) {
            if (!ids.has(key))
                this.positions.delete(key);
        }
        if (this.selected !== null && !ids.has(this.selected)) {
            const ranked = this.ranking();
            this.selected = ranked.length > 0 ? ranked[0] : null;
            this.report = null;
            this.overrides = {};
        }
    }
    checkRevision() {
        if (this.modelRevision !== null && this.client.revision !== this.modelRevision) {
            this.stale = true;
        }
    }
    /** Refetch the model after a stale warning. */
    async resync() {
        this.syncModel(await this.client.model());
        if (this.selected !== null)
            await this.refreshAnalysis();
    }
}
