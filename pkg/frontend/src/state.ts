/** Client-side workflow state. All numbers live in service payloads; these
 * classes only track menu navigation and the operator's pending decisions. */

import type { WorkbenchClient } from "./api";
import type {
  HomogeneityResponse,
  Menu,
  OutlierSuggestion,
  TableName,
} from "./types";
import { TABLE_NAMES } from "./types";

export interface StoreSnapshot {
  counts: Record<string, number>;
  selectedExperiment: string | null;
}

export class WorkbenchView {
  activeMenu: Menu = "processing";
  snapshot: StoreSnapshot = { counts: {}, selectedExperiment: null };

  constructor(private client: WorkbenchClient) {}

  navigate(menu: Menu): void {
    this.activeMenu = menu;
  }

  selectExperiment(id: string | null): void {
    this.snapshot.selectedExperiment = id;
  }

  /** Entity counts for the menu rail, straight from the listing endpoints. */
  async refreshSnapshot(): Promise<StoreSnapshot> {
    const counts: Record<string, number> = {};
    for (const table of TABLE_NAMES) {
      const listing = await this.client.listEntities(table as TableName);
      counts[table] = listing.count;
    }
    this.snapshot = { ...this.snapshot, counts };
    return this.snapshot;
  }
}

export type SuggestionDecision = "pending" | "accepted" | "rejected";

export interface DialogEntry {
  suggestion: OutlierSuggestion;
  decision: SuggestionDecision;
}

/** The suggestion -> operator decision -> re-analysis loop.
 *
 * Exclusions are posted only on explicit accept and only after the server
 * confirms; once every suggestion is resolved the same analysis re-runs and
 * the verdict updates. Rejections touch nothing.
 */
export class EliminationDialog {
  entries: DialogEntry[] = [];
  analysis: HomogeneityResponse | null = null;
  rerunCount = 0;
  onUpdate: () => void = () => {};

  constructor(
    private client: WorkbenchClient,
    private experimentId: string,
    private outputCode: string,
  ) {}

  get pendingSuggestions(): OutlierSuggestion[] {
    return this.entries.filter((e) => e.decision === "pending").map((e) => e.suggestion);
  }

  get verdict(): boolean | null {
    return this.analysis ? this.analysis.homogeneity.homogeneous : null;
  }

  async analyze(): Promise<HomogeneityResponse> {
    const result = await this.client.homogeneity(this.experimentId, this.outputCode);
    this.analysis = result;
    this.entries = result.suggestions.map((suggestion) => ({
      suggestion,
      decision: "pending" as SuggestionDecision,
    }));
    this.onUpdate();
    return result;
  }

  async accept(index: number): Promise<void> {
    const entry = this.requirePending(index);
    const s = entry.suggestion;
    // no optimistic update: the flag flips only after the server confirms
    await this.client.setExclusion(
      s.run_reference,
      true,
      `Grubbs alpha=${s.alpha} G=${s.statistic}`,
    );
    entry.decision = "accepted";
    this.onUpdate();
    await this.maybeRerun();
  }

  async reject(index: number): Promise<void> {
    const entry = this.requirePending(index);
    entry.decision = "rejected";
    this.onUpdate();
    await this.maybeRerun();
  }

  private requirePending(index: number): DialogEntry {
    const entry = this.entries[index];
    if (!entry) throw new Error(`no suggestion at index ${index}`);
    if (entry.decision !== "pending") throw new Error("suggestion already resolved");
    return entry;
  }

  private async maybeRerun(): Promise<void> {
    if (this.entries.length === 0 || this.entries.some((e) => e.decision === "pending")) {
      return;
    }
    this.rerunCount += 1;
    await this.analyze();
  }
}
