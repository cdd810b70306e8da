/**
 * Playback clock: a position inside [0, duration] advanced by wall-time
 * deltas while playing. Scrubbing clamps rather than errors, so UI
 * inputs can be forwarded unchecked.
 */

export class PlaybackClock {
  readonly duration: number;
  clock = 0;
  playing = false;
  rate = 1.0;

  constructor(duration: number) {
    if (!(Number.isFinite(duration) && duration >= 0)) {
      throw new RangeError(`duration must be a finite non-negative number, got ${duration}`);
    }
    this.duration = duration;
  }

  setTime(t: number): void {
    this.clock = Math.min(Math.max(t, 0), this.duration);
  }

  play(): void {
    // restarting from the end replays rather than staying pinned there
    if (this.clock >= this.duration && this.duration > 0) this.clock = 0;
    this.playing = true;
  }

  pause(): void {
    this.playing = false;
  }

  toggle(): void {
    if (this.playing) this.pause();
    else this.play();
  }

  /**
   * Advance by dt seconds of wall time; returns true when this tick
   * reached the end of the clip.
   */
  tick(dt: number): boolean {
    if (!this.playing || dt <= 0) return false;
    const next = this.clock + dt * this.rate;
    if (next >= this.duration) {
      this.clock = this.duration;
      return true;
    }
    this.clock = next;
    return false;
  }

  get atEnd(): boolean {
    return this.clock >= this.duration;
  }
}
