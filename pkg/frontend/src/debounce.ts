/** Timer indirection so debounced behavior is testable without real clocks. */

export interface Scheduler {
  schedule(fn: () => void, ms: number): number;
  cancel(id: number): void;
}

export const realScheduler: Scheduler = {
  schedule: (fn, ms) => setTimeout(fn, ms) as unknown as number,
  cancel: (id) => clearTimeout(id),
};

/** Deterministic scheduler for tests: tasks fire when advance() passes them. */
export class ManualScheduler implements Scheduler {
  private next = 1;
  private now = 0;
  private readonly tasks = new Map<number, { due: number; fn: () => void }>();

  schedule(fn: () => void, ms: number): number {
    const id = this.next++;
    this.tasks.set(id, { due: this.now + ms, fn });
    return id;
  }

  cancel(id: number): void {
    this.tasks.delete(id);
  }

  /** Move the clock forward, firing due tasks in due-time order. */
  advance(ms: number): void {
    this.now += ms;
    for (const [id, task] of [...this.tasks].sort((a, b) => a[1].due - b[1].due)) {
      if (task.due <= this.now) {
        this.tasks.delete(id);
        task.fn();
      }
    }
  }

  get pending(): number {
    return this.tasks.size;
  }
}
