/** Coalesce rapid-fire async requests so only the latest one lands.
 *
 * Slider drags can outpace the service; the rule is one in-flight request,
 * and every submission while busy replaces the queued one. Stale responses
 * never reach the consumer.
 */

export class LatestWins<A, R> {
  private inFlight = false;
  private queued: A | null = null;
  private sequence = 0;

  constructor(
    private perform: (args: A) => Promise<R>,
    private deliver: (result: R, args: A) => void,
    private onError: (err: unknown, args: A) => void = () => {},
  ) {}

  submit(args: A): void {
    if (this.inFlight) {
      this.queued = args;
      return;
    }
    void this.run(args);
  }

  private async run(args: A): Promise<void> {
    this.inFlight = true;
    const ticket = ++this.sequence;
    try {
      const result = await this.perform(args);
      if (ticket === this.sequence && this.queued === null) {
        this.deliver(result, args);
      }
    } catch (err) {
      if (ticket === this.sequence && this.queued === null) {
        this.onError(err, args);
      }
    } finally {
      this.inFlight = false;
      if (this.queued !== null) {
        const next = this.queued;
        this.queued = null;
        void this.run(next);
      }
    }
  }

  get busy(): boolean {
    return this.inFlight;
  }
}
