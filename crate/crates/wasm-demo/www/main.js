import init, { simulate, equivalence, distinct_walks } from "./pkg/qwm_wasm.js";

const $ = (id) => document.getElementById(id);

function plot(canvas, xs, ys, { bars = false, label = "" } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 30;
  ctx.clearRect(0, 0, w, h);
  const x0 = Math.min(...xs), x1 = Math.max(...xs);
  const y1 = Math.max(...ys) || 1;
  const sx = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const sy = (y) => h - pad - (y / y1) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = ctx.strokeStyle = "#2a6fb0";
  if (bars) {
    const bw = Math.max(1, (w - 2 * pad) / (x1 - x0 + 1) - 1);
    xs.forEach((x, i) => ctx.fillRect(sx(x) - bw / 2, sy(ys[i]), bw, h - pad - sy(ys[i])));
  } else {
    ctx.beginPath();
    xs.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(ys[i])) : ctx.moveTo(sx(x), sy(ys[i]))));
    ctx.stroke();
  }
  ctx.fillStyle = "#222";
  ctx.fillText(label, pad + 4, pad - 8);
  ctx.fillText(String(x0), pad, h - pad + 14);
  ctx.fillText(String(x1), w - pad - 20, h - pad + 14);
  ctx.fillText(y1.toPrecision(3), 2, pad + 4);
}

function guarded(out, f) {
  out.classList.remove("error");
  try {
    f();
  } catch (e) {
    out.classList.add("error");
    out.textContent = String(e);
  }
}

function run() {
  guarded($("run-info"), () => {
    const r = JSON.parse(simulate($("class").value, $("preset").value, +$("seed").value, +$("steps").value));
    const dist = r.final_distribution;
    plot($("dist"), dist.map((p) => p[0]), dist.map((p) => p[1]), { bars: true, label: `P(x) at t = ${r.t_max}` });
    const ts = r.variance.map((_, t) => t);
    plot($("var"), ts, r.variance, { label: "variance of position vs t" });
    const T = r.t_max, half = Math.floor(T / 2);
    $("run-info").textContent =
      `var(${T}) = ${r.variance[T].toFixed(3)}, var(${T})/var(${half}) = ${(r.variance[T] / r.variance[half]).toFixed(3)}\n` +
      `occupancy rate at t = ${T}: ${r.occupancy[T].toFixed(4)}, P(0, ${T - (T % 2)}) = ${r.origin[T - (T % 2)].toFixed(4)}\n` +
      `max norm drift: ${r.max_norm_drift.toExponential(2)}`;
  });
}

function checkEquivalence() {
  guarded($("eq-info"), () => {
    const r = JSON.parse(equivalence(+$("eq-steps").value));
    $("eq-info").textContent =
      `constraint residual ${r.max_constraint_residual.toExponential(2)}, ` +
      `amplitude difference ${r.max_alpha_diff.toExponential(2)}, ` +
      `total variation ${r.max_total_variation.toExponential(2)}\n` +
      `perturbed initial state: residual ${r.perturbed_constraint_residual.toFixed(3)}\n` +
      (r.pass ? "equivalent" : "NOT equivalent");
  });
}

function countDistinct() {
  guarded($("dw-info"), () => {
    const r = JSON.parse(distinct_walks(+$("dw-seeds").value, +$("dw-steps").value));
    $("dw-info").textContent =
      `${r.seeds.length} seeds give ${r.n_classes} distinct distribution histories ` +
      `(${r.n_keys} local patterns near the origin, ${r.key_mismatches} mismatches)`;
  });
}

await init();
$("run").onclick = run;
$("eq").onclick = checkEquivalence;
$("dw").onclick = countDistinct;
run();
