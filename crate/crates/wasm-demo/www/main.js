// Built by `wasm-pack build crates/wasm-demo --target web --out-dir www/pkg`.
import init, { hadamard_failure_curve, overflow_bound_curve, paldc_locality } from "./pkg/aldc_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function rows(flat, width) {
  const out = [];
  for (let i = 0; i < flat.length; i += width) out.push(Array.from(flat.slice(i, i + width)));
  return out;
}

// series: [{ys, color}], xs shared; log plots take log10 and skip non-finite values
function plot(canvas, xs, series, log) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, w, h);
  const tf = (v) => (log ? Math.log10(v) : v);
  const all = series.flatMap((s) => s.ys.map(tf)).filter(Number.isFinite);
  if (all.length === 0) return;
  let lo = log ? Math.min(...all) : 0;
  let hi = Math.max(...all);
  if (hi === lo) hi = lo + 1;
  const x0 = xs[0], x1 = xs[xs.length - 1] || 1;
  const px = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const py = (y) => h - pad - ((tf(y) - lo) / (hi - lo)) * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad, h - pad);
  ctx.stroke();
  ctx.fillStyle = "#333";
  ctx.font = "11px sans-serif";
  ctx.fillText(log ? `1e${hi.toFixed(1)}` : hi.toFixed(3), 2, pad);
  ctx.fillText(log ? `1e${lo.toFixed(1)}` : "0", 2, h - pad);
  ctx.fillText(x1.toFixed(3), w - pad - 20, h - pad + 15);

  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    let pen = false;
    xs.forEach((x, i) => {
      const y = s.ys[i];
      if (!Number.isFinite(tf(y))) { pen = false; return; }
      pen ? ctx.lineTo(px(x), py(y)) : ctx.moveTo(px(x), py(y));
      pen = true;
    });
    ctx.stroke();
  }
}

function runHadamard() {
  const r = rows(hadamard_failure_curve(num("h-k"), num("h-kappa"), num("h-delta"), 16, num("h-trials"), BigInt(1)), 4);
  const xs = r.map((v) => v[0]);
  plot($("h-plot"), xs, [
    { ys: r.map((v) => v[1]), color: "#1f77b4" },
    { ys: r.map((v) => v[2]), color: "#d62728" },
    { ys: r.map((v) => v[3]), color: "#555" },
  ], false);
}

function runBound() {
  const dc = num("b-dc");
  const r = rows(overflow_bound_curve(num("b-A"), dc, dc, 60), 3);
  plot($("b-plot"), r.map((v) => v[0]), [
    { ys: r.map((v) => v[1]), color: "#1f77b4" },
    { ys: r.map((v) => v[2]), color: "#2ca02c" },
  ], true);
}

function runLocality() {
  try {
    const [q, len, amort, bound, ok, blocks] = paldc_locality(
      num("p-k"), num("p-a"), num("p-A"), num("p-l"), num("p-r"), num("p-delta"), BigInt(Date.now()));
    $("p-out").textContent =
      `queries ${q} for ${len} bits across ${blocks} block(s)\n` +
      `amortized ${amort.toFixed(3)} (bound 2A/a = ${bound.toFixed(3)})\n` +
      `decoded ${ok ? "correctly" : "incorrectly"}`;
  } catch (e) {
    $("p-out").textContent = String(e);
  }
}

await init();
$("h-run").onclick = runHadamard;
$("b-run").onclick = runBound;
$("p-run").onclick = runLocality;
runBound();
