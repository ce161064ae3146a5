// Force-directed layout on typed arrays, sized for graphs in the
// filtered-network range (~10^4 nodes). Repulsion is approximated with a
// uniform spatial grid so a tick stays O(n) instead of O(n^2); springs act
// along links; a weak centering force keeps components on screen.

export interface LayoutLink {
  source: number;
  target: number;
  weight: number;
}

export interface ForceOptions {
  repulsion: number;
  springLength: number;
  springStrength: number;
  centerStrength: number;
  velocityDecay: number;
  cellSize: number;
}

const DEFAULTS: ForceOptions = {
  repulsion: 900,
  springLength: 30,
  springStrength: 0.05,
  centerStrength: 0.012,
  velocityDecay: 0.6,
  cellSize: 60,
};

export class ForceLayout {
  readonly n: number;
  readonly x: Float32Array;
  readonly y: Float32Array;
  private readonly vx: Float32Array;
  private readonly vy: Float32Array;
  private readonly pinned: Uint8Array;
  alpha = 1.0;
  alphaDecay = 0.015;
  alphaMin = 0.02;
  private readonly opts: ForceOptions;

  constructor(
    n: number,
    private readonly links: LayoutLink[],
    opts: Partial<ForceOptions> = {},
    seed = 1,
  ) {
    this.n = n;
    this.opts = { ...DEFAULTS, ...opts };
    this.x = new Float32Array(n);
    this.y = new Float32Array(n);
    this.vx = new Float32Array(n);
    this.vy = new Float32Array(n);
    this.pinned = new Uint8Array(n);
    // deterministic phyllotaxis seeding; a tiny LCG jitter breaks symmetry
    let s = seed >>> 0 || 1;
    const rand = () => {
      s = (s * 1664525 + 1013904223) >>> 0;
      return s / 2 ** 32;
    };
    for (let i = 0; i < n; i++) {
      const r = 12 * Math.sqrt(i + 0.5);
      const a = i * 2.3999632297286533 + rand() * 0.2;
      this.x[i] = r * Math.cos(a);
      this.y[i] = r * Math.sin(a);
    }
  }

  pin(i: number, px: number, py: number): void {
    this.pinned[i] = 1;
    this.x[i] = px;
    this.y[i] = py;
  }

  unpin(i: number): void {
    this.pinned[i] = 0;
  }

  get settled(): boolean {
    return this.alpha < this.alphaMin;
  }

  /** Advance one step; returns the current alpha. */
  tick(): number {
    const { repulsion, springLength, springStrength, centerStrength, velocityDecay, cellSize } =
      this.opts;
    const n = this.n;
    const a = this.alpha;

    // grid binning for near-field repulsion
    const cells = new Map<number, number[]>();
    const key = (cx: number, cy: number) => cx * 73856093 ^ (cy * 19349663);
    const cxOf = (i: number) => Math.floor(this.x[i]! / cellSize);
    const cyOf = (i: number) => Math.floor(this.y[i]! / cellSize);
    for (let i = 0; i < n; i++) {
      const k = key(cxOf(i), cyOf(i));
      let bucket = cells.get(k);
      if (!bucket) {
        bucket = [];
        cells.set(k, bucket);
      }
      bucket.push(i);
    }
    const maxDist2 = cellSize * cellSize;
    for (let i = 0; i < n; i++) {
      const cx = cxOf(i);
      const cy = cyOf(i);
      for (let dx = -1; dx <= 1; dx++) {
        for (let dy = -1; dy <= 1; dy++) {
          const bucket = cells.get(key(cx + dx, cy + dy));
          if (!bucket) continue;
          for (const j of bucket) {
            if (j <= i) continue;
            let ddx = this.x[i]! - this.x[j]!;
            let ddy = this.y[i]! - this.y[j]!;
            let d2 = ddx * ddx + ddy * ddy;
            if (d2 > maxDist2) continue;
            if (d2 < 1e-4) {
              ddx = (i % 7) - 3 + 0.11;
              ddy = (j % 5) - 2 + 0.07;
              d2 = ddx * ddx + ddy * ddy;
            }
            const f = (repulsion * a) / d2;
            const fx = ddx * f;
            const fy = ddy * f;
            this.vx[i] += fx;
            this.vy[i] += fy;
            this.vx[j] -= fx;
            this.vy[j] -= fy;
          }
        }
      }
    }

    for (const link of this.links) {
      const i = link.source;
      const j = link.target;
      const ddx = this.x[j]! - this.x[i]!;
      const ddy = this.y[j]! - this.y[i]!;
      const d = Math.sqrt(ddx * ddx + ddy * ddy) || 1e-3;
      const stretch = (d - springLength) / d;
      const f = springStrength * Math.min(link.weight, 4) * stretch * a;
      this.vx[i] += ddx * f;
      this.vy[i] += ddy * f;
      this.vx[j] -= ddx * f;
      this.vy[j] -= ddy * f;
    }

    for (let i = 0; i < n; i++) {
      if (this.pinned[i]) {
        this.vx[i] = 0;
        this.vy[i] = 0;
        continue;
      }
      this.vx[i] = (this.vx[i]! - this.x[i]! * centerStrength * a) * velocityDecay;
      this.vy[i] = (this.vy[i]! - this.y[i]! * centerStrength * a) * velocityDecay;
      this.x[i] += this.vx[i]!;
      this.y[i] += this.vy[i]!;
    }

    this.alpha = Math.max(this.alpha * (1 - this.alphaDecay), 0);
    return this.alpha;
  }

  /** Run ticks until settled or maxTicks; used headless and in tests. */
  run(maxTicks = 300): number {
    let t = 0;
    while (!this.settled && t < maxTicks) {
      this.tick();
      t++;
    }
    return t;
  }

  /** Mean link stretch; a sanity measure that layout reduces over time. */
  meanLinkDistance(): number {
    if (this.links.length === 0) return 0;
    let total = 0;
    for (const l of this.links) {
      const dx = this.x[l.source]! - this.x[l.target]!;
      const dy = this.y[l.source]! - this.y[l.target]!;
      total += Math.sqrt(dx * dx + dy * dy);
    }
    return total / this.links.length;
  }
}
