// Minimal multi-series line chart on canvas for the trend view. All values
// are server-computed; this module only draws what it is given.
export class TrendChart {
    canvas;
    series = [];
    constructor(canvas) {
        this.canvas = canvas;
    }
    setSeries(series) {
        this.series = series.filter((s) => s.values.some((v) => v !== null));
        this.draw();
    }
    draw() {
        const ctx = this.canvas.getContext("2d");
        if (!ctx)
            return;
        const { width, height } = this.canvas;
        const pad = { left: 48, right: 12, top: 12, bottom: 26 };
        ctx.clearRect(0, 0, width, height);
        if (this.series.length === 0)
            return;
        const allDays = [...new Set(this.series.flatMap((s) => s.days))].sort();
        const dayIndex = new Map(allDays.map((d, i) => [d, i]));
        let lo = Infinity;
        let hi = -Infinity;
        for (const s of this.series) {
            for (const v of s.values) {
                if (v !== null) {
                    lo = Math.min(lo, v);
                    hi = Math.max(hi, v);
                }
            }
        }
        if (!isFinite(lo))
            return;
        const span = hi - lo || 1;
        lo -= span * 0.08;
        hi += span * 0.08;
        const xOf = (day) => pad.left + ((dayIndex.get(day) ?? 0) / Math.max(allDays.length - 1, 1)) *
            (width - pad.left - pad.right);
        const yOf = (v) => height - pad.bottom - ((v - lo) / (hi - lo)) * (height - pad.top - pad.bottom);
        ctx.strokeStyle = "#d8dbe2";
        ctx.fillStyle = "#667";
        ctx.font = "11px sans-serif";
        ctx.lineWidth = 1;
        for (let g = 0; g <= 4; g++) {
            const v = lo + ((hi - lo) * g) / 4;
            const y = yOf(v);
            ctx.beginPath();
            ctx.moveTo(pad.left, y);
            ctx.lineTo(width - pad.right, y);
            ctx.stroke();
            ctx.fillText(v.toFixed(3), 4, y + 4);
        }
        const tickEvery = Math.max(1, Math.floor(allDays.length / 6));
        for (let i = 0; i < allDays.length; i += tickEvery) {
            ctx.fillText(allDays[i].slice(5), xOf(allDays[i]) - 14, height - 8);
        }
        for (const s of this.series) {
            ctx.strokeStyle = s.color;
            ctx.lineWidth = 1.6;
            ctx.setLineDash(s.dashed ? [5, 4] : []);
            ctx.beginPath();
            let pen = false;
            for (let i = 0; i < s.days.length; i++) {
                const v = s.values[i];
                if (v === null || v === undefined) {
                    pen = false;
                    continue;
                }
                const x = xOf(s.days[i]);
                const y = yOf(v);
                if (pen) {
                    ctx.lineTo(x, y);
                }
                else {
                    ctx.moveTo(x, y);
                    pen = true;
                }
            }
            ctx.stroke();
        }
        ctx.setLineDash([]);
        let lx = pad.left + 8;
        for (const s of this.series) {
            ctx.fillStyle = s.color;
            ctx.fillRect(lx, pad.top, 10, 10);
            ctx.fillStyle = "#333";
            ctx.fillText(s.label, lx + 14, pad.top + 9);
            lx += 24 + ctx.measureText(s.label).width;
        }
    }
}
