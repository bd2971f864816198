import init, { voxel_view, lif_trace, spike_raster } from "./pkg/dcsr_demo.js";

const PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
  "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173", "#3182bd"];

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function clear(canvas) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  return ctx;
}

function fail(stats, err) {
  $(stats).textContent = `error: ${err.message ?? err}`;
}

let view = null;

function buildVoxel() {
  try {
    view = voxel_view(num("vx-n"), num("vx-k"), num("vx-grid"), num("vx-sigma"), BigInt(num("vx-seed")));
    $("vx-stats").textContent =
      `${view.synapses} synapses, edge cut ${view.edge_cut} (${(100 * view.edge_cut / Math.max(view.synapses, 1)).toFixed(1)}%), balance ${view.balance.toFixed(3)}`;
    drawVoxel();
  } catch (e) {
    view = null;
    fail("vx-stats", e);
  }
}

function drawVoxel() {
  if (!view) return;
  const canvas = $("vx-canvas");
  const ctx = clear(canvas);
  const xyz = view.xyz, parts = view.parts;
  const a = (num("vx-rot") * Math.PI) / 180;
  const s = canvas.height * 0.55, cx = canvas.width / 2, cy = canvas.height / 2;
  // Rotate about the vertical axis through the box centre, tilt slightly.
  const project = (i) => {
    const x = xyz[3 * i] - 0.5, y = xyz[3 * i + 1] - 0.5, z = xyz[3 * i + 2] - 0.5;
    const rx = x * Math.cos(a) + y * Math.sin(a);
    const ry = -x * Math.sin(a) + y * Math.cos(a);
    return [cx + s * rx, cy - s * (z * 0.9 + ry * 0.35), ry];
  };
  if ($("vx-edges").checked) {
    const e = view.edges;
    ctx.strokeStyle = "rgba(0,0,0,0.06)";
    ctx.beginPath();
    for (let j = 0; j < e.length; j += 2) {
      const [x0, y0] = project(e[j]), [x1, y1] = project(e[j + 1]);
      ctx.moveTo(x0, y0);
      ctx.lineTo(x1, y1);
    }
    ctx.stroke();
  }
  const order = Array.from(parts.keys()).map((i) => [i, project(i)]).sort((p, q) => q[1][2] - p[1][2]);
  for (const [i, [px, py]] of order) {
    ctx.fillStyle = PALETTE[parts[i] % PALETTE.length];
    ctx.beginPath();
    ctx.arc(px, py, 3, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function drawLif() {
  try {
    const th = num("lif-th"), dt = num("lif-dt");
    const v = lif_trace(num("lif-drive"), num("lif-tau"), th, num("lif-ref"), dt, num("lif-steps"));
    const canvas = $("lif-canvas");
    const ctx = clear(canvas);
    const pad = 30;
    const lo = Math.min(0, ...v), hi = Math.max(th, ...v) * 1.1 || 1;
    const X = (i) => pad + (i / (v.length - 1)) * (canvas.width - 2 * pad);
    const Y = (y) => canvas.height - pad - ((y - lo) / (hi - lo)) * (canvas.height - 2 * pad);
    ctx.strokeStyle = "#d62728";
    ctx.setLineDash([4, 4]);
    ctx.beginPath();
    ctx.moveTo(pad, Y(th));
    ctx.lineTo(canvas.width - pad, Y(th));
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.strokeStyle = "#1f77b4";
    ctx.beginPath();
    v.forEach((y, i) => (i ? ctx.lineTo(X(i), Y(y)) : ctx.moveTo(X(i), Y(y))));
    ctx.stroke();
    const spikes = [];
    v.forEach((y, i) => { if (i && y >= th) spikes.push(i); });
    ctx.fillStyle = "#222";
    for (const i of spikes) ctx.fillRect(X(i) - 1, pad - 12, 2, 10);
    $("lif-stats").textContent = spikes.length
      ? `first spike after step ${spikes[0]} (t = ${(spikes[0] * dt).toFixed(2)} ms), ${spikes.length} spikes`
      : "no spikes";
  } catch (e) {
    fail("lif-stats", e);
  }
}

function drawRaster() {
  try {
    const steps = num("ras-steps");
    const r = spike_raster(num("ras-n"), num("ras-k"), num("ras-bias"), BigInt(steps), BigInt(num("ras-seed")));
    const canvas = $("ras-canvas");
    const ctx = clear(canvas);
    const t = r.steps, g = r.vertices, parts = r.parts, n = r.n;
    const w = canvas.width / (steps + 1), h = canvas.height / n;
    for (let j = 0; j < t.length; j++) {
      ctx.fillStyle = PALETTE[parts[g[j]] % PALETTE.length];
      ctx.fillRect(t[j] * w, g[j] * h, Math.max(w, 1.5), Math.max(h, 1.5));
    }
    $("ras-stats").textContent =
      `${t.length} spikes from ${n} neurons; color = part. The raster is identical for every number of parts.`;
  } catch (e) {
    fail("ras-stats", e);
  }
}

await init();
$("status").textContent = "";
for (const id of ["vx-n", "vx-k", "vx-grid", "vx-sigma", "vx-seed"]) $(id).addEventListener("change", buildVoxel);
$("vx-rot").addEventListener("input", drawVoxel);
$("vx-edges").addEventListener("change", drawVoxel);
for (const id of ["lif-drive", "lif-tau", "lif-th", "lif-ref", "lif-dt", "lif-steps"]) $(id).addEventListener("input", drawLif);
for (const id of ["ras-n", "ras-k", "ras-bias", "ras-steps", "ras-seed"]) $(id).addEventListener("change", drawRaster);
buildVoxel();
drawLif();
drawRaster();
