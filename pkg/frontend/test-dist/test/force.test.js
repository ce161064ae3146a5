import assert from "node:assert/strict";
import { test } from "node:test";
import { ForceLayout } from "../src/force.js";
function clique(offset, size) {
    const links = [];
    for (let i = 0; i < size; i++) {
        for (let j = i + 1; j < size; j++) {
            links.push({ source: offset + i, target: offset + j, weight: 3 });
        }
    }
    return links;
}
test("two cliques joined by one weak edge separate spatially", () => {
    const links = [
        ...clique(0, 6),
        ...clique(6, 6),
        { source: 0, target: 6, weight: 0.3 },
    ];
    const layout = new ForceLayout(12, links, {}, 7);
    layout.run(400);
    const centroid = (from, to) => {
        let cx = 0;
        let cy = 0;
        for (let i = from; i < to; i++) {
            cx += layout.x[i];
            cy += layout.y[i];
        }
        return [cx / (to - from), cy / (to - from)];
    };
    const [ax, ay] = centroid(0, 6);
    const [bx, by] = centroid(6, 12);
    const between = Math.hypot(ax - bx, ay - by);
    let withinA = 0;
    for (let i = 0; i < 6; i++) {
        withinA += Math.hypot(layout.x[i] - ax, layout.y[i] - ay) / 6;
    }
    assert.ok(between > 2 * withinA, `clusters overlap: between=${between}, within=${withinA}`);
});
test("layout pulls linked nodes together", () => {
    const links = [];
    for (let i = 0; i < 40; i++) {
        links.push({ source: i, target: (i + 1) % 40, weight: 2 });
    }
    const layout = new ForceLayout(40, links, {}, 3);
    const before = layout.meanLinkDistance();
    layout.run(300);
    const after = layout.meanLinkDistance();
    assert.ok(after < before, `mean link distance ${before} -> ${after}`);
});
test("deterministic for a fixed seed", () => {
    const links = clique(0, 5);
    const a = new ForceLayout(5, links, {}, 42);
    const b = new ForceLayout(5, links, {}, 42);
    a.run(50);
    b.run(50);
    assert.deepEqual([...a.x], [...b.x]);
    assert.deepEqual([...a.y], [...b.y]);
});
test("pinned nodes stay put while dragging", () => {
    const layout = new ForceLayout(4, clique(0, 4), {}, 1);
    layout.pin(0, 123, -45);
    layout.tick();
    layout.tick();
    assert.equal(layout.x[0], 123);
    assert.equal(layout.y[0], -45);
});
test("filtered-graph-scale budget: 8k nodes tick fast enough for interaction", () => {
    // the network view animates while alpha decays and redraws on pan/zoom;
    // a tick at full filtered-graph scale must fit well inside a 50 ms frame
    const n = 8000;
    const links = [];
    let s = 99;
    const rand = () => {
        s = (s * 1664525 + 1013904223) >>> 0;
        return s / 2 ** 32;
    };
    for (let i = 0; i < 26000; i++) {
        const a = Math.floor(rand() * n);
        const b = Math.floor(rand() * n);
        if (a !== b)
            links.push({ source: a, target: b, weight: 1 + rand() * 3 });
    }
    const layout = new ForceLayout(n, links, {}, 5);
    for (let i = 0; i < 5; i++)
        layout.tick(); // warm up
    const t0 = process.hrtime.bigint();
    const ticks = 10;
    for (let i = 0; i < ticks; i++)
        layout.tick();
    const ms = Number(process.hrtime.bigint() - t0) / 1e6 / ticks;
    assert.ok(ms < 50, `tick took ${ms.toFixed(1)} ms at ${n} nodes`);
});
