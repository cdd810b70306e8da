/**
 * Staging gate: scene documents group layers into ordered stages (by
 * default gm+avatar together, the fine glyphs afterwards). On first
 * playback only the first stage is shown; each completed full pass of
 * the clock unlocks the next stage. Once unlocked, a layer stays
 * unlocked and is freely toggleable.
 */

export class StagingGate {
  readonly stages: readonly (readonly string[])[];
  private completed = 0; // index of the newest unlocked stage

  constructor(staging: readonly (readonly string[])[]) {
    this.stages = staging.map((stage) => [...stage]);
  }

  /** Stage index a layer belongs to, or -1 when it is not staged. */
  stageIndex(layer: string): number {
    return this.stages.findIndex((stage) => stage.includes(layer));
  }

  /** Whether a layer's stage has been reached. Unstaged layers are free. */
  unlocked(layer: string): boolean {
    const i = this.stageIndex(layer);
    return i <= this.completed;
  }

  get fullyOpen(): boolean {
    return this.completed >= this.stages.length - 1;
  }

  /**
   * Record a completed full playback pass; returns true when that
   * unlocked a new stage.
   */
  completePass(): boolean {
    if (this.fullyOpen) return false;
    this.completed += 1;
    return true;
  }

  /** Layers visible right now given the user's intent. */
  gatedVisible(intent: ReadonlySet<string>): Set<string> {
    const out = new Set<string>();
    for (const layer of intent) {
      if (this.unlocked(layer)) out.add(layer);
    }
    return out;
  }
}
