// One sequencer per control keeps at most one accepted in-flight response:
// a reply is applied only if no newer request was issued for that control.

export class RequestSequencer {
  private issued = 0;
  private applied = 0;

  next(): number {
    this.issued += 1;
    return this.issued;
  }

  /** True when the response for `id` is still the freshest one. */
  accept(id: number): boolean {
    if (id < this.issued) return false;
    if (id <= this.applied) return false;
    this.applied = id;
    return true;
  }

  get pending(): boolean {
    return this.issued > this.applied;
  }
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  ms: number,
  timers: { set: typeof setTimeout; clear: typeof clearTimeout } = {
    set: setTimeout,
    clear: clearTimeout,
  },
): (...args: A) => void {
  let handle: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (handle !== undefined) timers.clear(handle);
    handle = timers.set(() => fn(...args), ms);
  };
}
