/**
 * Preview refresh plumbing for the tuning screen.
 *
 * Debouncer coalesces slider-drag bursts (trailing edge, 150 ms default).
 * PreviewScheduler keeps at most one preview request in flight, guarantees a
 * trailing refetch after changes that land mid-flight, and never surfaces a
 * preview older than the last acknowledged revision.
 */

export const DEFAULT_DEBOUNCE_MS = 150;

export class Debouncer {
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(private readonly delayMs: number = DEFAULT_DEBOUNCE_MS) {}

  /** Schedules fn on the trailing edge; a newer call replaces an older one. */
  schedule(fn: () => void): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      fn();
    }, this.delayMs);
  }

  cancel(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  get pending(): boolean {
    return this.timer !== null;
  }
}

export interface Revisioned {
  revision: number;
}

export class PreviewScheduler<T extends Revisioned> {
  private inFlight = false;
  private trailing = false;
  private ackedRevision = 0;
  private shownRevision = 0;
  private idleWaiters: Array<() => void> = [];

  constructor(
    private readonly fetchPreview: () => Promise<T>,
    private readonly show: (result: T) => void,
    private readonly onError: (error: unknown) => void = () => {},
  ) {}

  get displayedRevision(): number {
    return this.shownRevision;
  }

  get busy(): boolean {
    return this.inFlight || this.trailing;
  }

  /** A mutation was acknowledged at `revision`; refetch (coalesced). */
  notify(revision: number): void {
    if (revision > this.ackedRevision) this.ackedRevision = revision;
    this.kick();
  }

  /** Fetch with no new acknowledgment (initial render). */
  refresh(): void {
    this.kick();
  }

  /** Resolves once nothing is in flight or queued. */
  idle(): Promise<void> {
    if (!this.busy) return Promise.resolve();
    return new Promise((resolve) => this.idleWaiters.push(resolve));
  }

  private kick(): void {
    if (this.inFlight) {
      this.trailing = true;
      return;
    }
    void this.launch();
  }

  private async launch(): Promise<void> {
    this.inFlight = true;
    try {
      const result = await this.fetchPreview();
      if (result.revision >= this.ackedRevision) {
        this.trailing = false; // reflects every acknowledged mutation already
        if (result.revision > this.shownRevision) {
          this.shownRevision = result.revision;
          this.show(result);
        }
      } else {
        this.trailing = true; // stale render: silently refetch
      }
    } catch (error) {
      this.trailing = false; // do not hammer a failing server
      this.onError(error);
    } finally {
      this.inFlight = false;
      if (this.trailing) {
        this.trailing = false;
        void this.launch();
      } else {
        const waiters = this.idleWaiters;
        this.idleWaiters = [];
        for (const resolve of waiters) resolve();
      }
    }
  }
}
