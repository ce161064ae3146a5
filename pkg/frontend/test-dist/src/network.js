// Canvas renderer for the hashtag network: force layout, pan/zoom, node
// dragging and picking. Nodes are sized by occurrence count and colored by
// assigned class (falling back to community); candidates get a halo.
import { ForceLayout } from "./force.js";
export const DEFAULT_PALETTE = {
    classes: {},
    communities: ["#4c78a8", "#e45756", "#72b7b2", "#f58518", "#9d755d", "#b279a2"],
    unassigned: "#9da3ad",
    candidateHalo: "#f2c14e",
};
const CLASS_COLOR_CYCLE = ["#3366cc", "#dc3912", "#109618", "#990099", "#ff9900"];
export class NetworkView {
    canvas;
    palette;
    layout = null;
    nodes = [];
    links = [];
    index = new Map();
    scale = 1;
    tx = 0;
    ty = 0;
    dragging = -1;
    panning = false;
    lastPointer = [0, 0];
    raf = 0;
    onSelect = null;
    selected = -1;
    constructor(canvas, palette = DEFAULT_PALETTE) {
        this.canvas = canvas;
        this.palette = palette;
        canvas.addEventListener("wheel", (e) => this.onWheel(e), { passive: false });
        canvas.addEventListener("pointerdown", (e) => this.onDown(e));
        canvas.addEventListener("pointermove", (e) => this.onMove(e));
        canvas.addEventListener("pointerup", () => this.onUp());
        canvas.addEventListener("pointerleave", () => this.onUp());
    }
    setGraph(graph) {
        this.index.clear();
        const classColors = { ...this.palette.classes };
        let cycle = 0;
        this.nodes = graph.nodes.map((n, i) => {
            this.index.set(n.id, i);
            let color = this.palette.unassigned;
            if (n.class !== undefined) {
                if (!(n.class in classColors)) {
                    classColors[n.class] = CLASS_COLOR_CYCLE[cycle++ % CLASS_COLOR_CYCLE.length];
                }
                color = classColors[n.class];
            }
            else if (n.community !== undefined) {
                color = this.palette.communities[n.community % this.palette.communities.length];
            }
            return {
                id: n.id,
                radius: 2.5 + 2.2 * Math.log10(1 + n.count),
                color,
                candidate: n.candidate_for !== undefined,
            };
        });
        this.links = graph.links
            .filter((l) => this.index.has(l.source) && this.index.has(l.target))
            .map((l) => ({
            source: this.index.get(l.source),
            target: this.index.get(l.target),
            weight: l.s,
        }));
        this.layout = new ForceLayout(this.nodes.length, this.links);
        this.fitView();
        this.animate();
    }
    fitView() {
        const r = 12 * Math.sqrt(this.nodes.length + 1);
        const extent = Math.min(this.canvas.width, this.canvas.height);
        this.scale = extent / (2.2 * r || 1);
        this.tx = this.canvas.width / 2;
        this.ty = this.canvas.height / 2;
    }
    animate() {
        cancelAnimationFrame(this.raf);
        const step = () => {
            if (this.layout && !this.layout.settled) {
                this.layout.tick();
                this.raf = requestAnimationFrame(step);
            }
            this.draw();
        };
        this.raf = requestAnimationFrame(step);
    }
    draw() {
        const ctx = this.canvas.getContext("2d");
        if (!ctx || !this.layout)
            return;
        const { width, height } = this.canvas;
        ctx.clearRect(0, 0, width, height);
        ctx.save();
        ctx.translate(this.tx, this.ty);
        ctx.scale(this.scale, this.scale);
        ctx.lineWidth = 0.5 / this.scale;
        ctx.strokeStyle = "rgba(140,145,160,0.25)";
        ctx.beginPath();
        for (const l of this.links) {
            ctx.moveTo(this.layout.x[l.source], this.layout.y[l.source]);
            ctx.lineTo(this.layout.x[l.target], this.layout.y[l.target]);
        }
        ctx.stroke();
        // batch nodes by color to keep the draw cheap at 10^4 nodes
        const byColor = new Map();
        for (let i = 0; i < this.nodes.length; i++) {
            const c = this.nodes[i].color;
            let bucket = byColor.get(c);
            if (!bucket) {
                bucket = [];
                byColor.set(c, bucket);
            }
            bucket.push(i);
        }
        for (const [color, bucket] of byColor) {
            ctx.fillStyle = color;
            ctx.beginPath();
            for (const i of bucket) {
                const x = this.layout.x[i];
                const y = this.layout.y[i];
                ctx.moveTo(x + this.nodes[i].radius, y);
                ctx.arc(x, y, this.nodes[i].radius, 0, Math.PI * 2);
            }
            ctx.fill();
        }
        ctx.strokeStyle = this.palette.candidateHalo;
        ctx.lineWidth = 2 / this.scale;
        ctx.beginPath();
        for (let i = 0; i < this.nodes.length; i++) {
            if (!this.nodes[i].candidate)
                continue;
            const x = this.layout.x[i];
            const y = this.layout.y[i];
            ctx.moveTo(x + this.nodes[i].radius + 2, y);
            ctx.arc(x, y, this.nodes[i].radius + 2, 0, Math.PI * 2);
        }
        ctx.stroke();
        if (this.selected >= 0) {
            ctx.strokeStyle = "#111";
            ctx.lineWidth = 2.5 / this.scale;
            const i = this.selected;
            ctx.beginPath();
            ctx.arc(this.layout.x[i], this.layout.y[i], this.nodes[i].radius + 3, 0, Math.PI * 2);
            ctx.stroke();
        }
        ctx.restore();
    }
    toWorld(px, py) {
        return [(px - this.tx) / this.scale, (py - this.ty) / this.scale];
    }
    pick(px, py) {
        if (!this.layout)
            return -1;
        const [wx, wy] = this.toWorld(px, py);
        let best = -1;
        let bestD = Infinity;
        for (let i = 0; i < this.nodes.length; i++) {
            const dx = this.layout.x[i] - wx;
            const dy = this.layout.y[i] - wy;
            const d = Math.sqrt(dx * dx + dy * dy);
            if (d < this.nodes[i].radius + 4 / this.scale && d < bestD) {
                best = i;
                bestD = d;
            }
        }
        return best;
    }
    onWheel(e) {
        e.preventDefault();
        const factor = Math.exp(-e.deltaY * 0.0015);
        const [wx, wy] = this.toWorld(e.offsetX, e.offsetY);
        this.scale *= factor;
        this.tx = e.offsetX - wx * this.scale;
        this.ty = e.offsetY - wy * this.scale;
        this.draw();
    }
    onDown(e) {
        const hit = this.pick(e.offsetX, e.offsetY);
        this.lastPointer = [e.offsetX, e.offsetY];
        if (hit >= 0) {
            this.dragging = hit;
            this.selected = hit;
            this.onSelect?.(this.nodes[hit].id);
            if (this.layout) {
                this.layout.alpha = Math.max(this.layout.alpha, 0.1);
                this.animate();
            }
        }
        else {
            this.panning = true;
            if (this.selected >= 0) {
                this.selected = -1;
                this.onSelect?.(null);
            }
        }
    }
    onMove(e) {
        if (this.dragging >= 0 && this.layout) {
            const [wx, wy] = this.toWorld(e.offsetX, e.offsetY);
            this.layout.pin(this.dragging, wx, wy);
            this.draw();
        }
        else if (this.panning) {
            this.tx += e.offsetX - this.lastPointer[0];
            this.ty += e.offsetY - this.lastPointer[1];
            this.lastPointer = [e.offsetX, e.offsetY];
            this.draw();
        }
    }
    onUp() {
        if (this.dragging >= 0 && this.layout) {
            this.layout.unpin(this.dragging);
        }
        this.dragging = -1;
        this.panning = false;
    }
}
