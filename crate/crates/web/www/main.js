// Generated by `wasm-bindgen --target web` into ./pkg (see README).
import init, { applyStep, scenarioTrace, vpAnalysis, randomPermutation } from "./pkg/duploss_web.js";

const $ = (id) => document.getElementById(id);
const canvas = $("plot");
const ctx = canvas.getContext("2d");

let trace = null;

function parse(text) {
  return text.split(",").map((s) => s.trim()).filter((s) => s.length).map(Number);
}

function fail(el, err) {
  el.textContent = String(err.message ?? err);
  el.className = "error";
}

// Points (position, value), the highlighted window, and vp arrows.
function draw(perm, windowRange) {
  const values = parse(perm);
  const n = values.length;
  const pad = 30;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  const x = (pos) => pad + (n <= 1 ? w / 2 : ((pos - 1) / (n - 1)) * w);
  const y = (val) => pad + h - (n <= 1 ? h / 2 : ((val - 1) / (n - 1)) * h);
  ctx.clearRect(0, 0, canvas.width, canvas.height);

  if (windowRange) {
    const [a, b] = windowRange;
    const half = n > 1 ? w / (n - 1) / 2 : 10;
    ctx.fillStyle = "rgba(255, 190, 60, 0.25)";
    ctx.fillRect(x(a) - half, pad - 10, x(b) - x(a) + 2 * half, h + 20);
  }

  ctx.strokeStyle = "#ddd";
  ctx.beginPath();
  ctx.moveTo(x(1), y(1));
  ctx.lineTo(x(n), y(n));
  ctx.stroke();

  let info;
  try {
    info = JSON.parse(vpAnalysis(perm));
  } catch (e) {
    fail($("vp-out"), e);
    return;
  }
  if (n <= 60) {
    ctx.strokeStyle = "rgba(40, 90, 200, 0.5)";
    for (const v of info.vectors) {
      if (v.size === 0) continue;
      const yy = y(v.value);
      ctx.beginPath();
      ctx.moveTo(x(v.from), yy);
      ctx.lineTo(x(v.to), yy);
      const dir = v.to > v.from ? -1 : 1;
      ctx.lineTo(x(v.to) + dir * 6, yy - 4);
      ctx.moveTo(x(v.to), yy);
      ctx.lineTo(x(v.to) + dir * 6, yy + 4);
      ctx.stroke();
    }
  }

  const domain = new Set(info.domain);
  const r = n > 200 ? 1.5 : n > 60 ? 2.5 : 4;
  values.forEach((v, i) => {
    ctx.fillStyle = domain.has(v) ? "#c0392b" : "#555";
    ctx.beginPath();
    ctx.arc(x(i + 1), y(v), r, 0, 2 * Math.PI);
    ctx.fill();
  });

  const windows = info.windows.map((wd) => `${wd.vp ? "vp" : "free"} ${wd.from}..${wd.to}`);
  $("vp-out").className = "";
  $("vp-out").textContent =
    `descents {${info.descents.join(",")}}  inversions ${info.inversions}\n` +
    `vp-domain {${info.domain.join(",")}}\n` +
    (windows.length <= 12 ? windows.join("  ") : `${windows.length} windows`);
}

function showFrame(i) {
  if (!trace) return;
  const perm = trace.frames[i];
  const step = i > 0 ? trace.steps[i - 1] : null;
  draw(perm, step ? [step.start, step.start + step.width - 1] : null);
  const what = step
    ? `step ${i}/${trace.steps.length}: window ${step.start}..${step.start + step.width - 1} keep {${step.keep.join(",")}}`
    : `identity, ${trace.steps.length} steps with K = ${trace.width_limit}`;
  $("frame-info").className = "";
  $("frame-info").textContent = `${what}\n${perm.length <= 200 ? perm : ""}`;
}

function build() {
  try {
    trace = JSON.parse(scenarioTrace($("perm").value, $("algo").value, Number($("k").value)));
  } catch (e) {
    trace = null;
    fail($("frame-info"), e);
    return;
  }
  const slider = $("frame");
  slider.max = trace.steps.length;
  slider.value = trace.steps.length;
  showFrame(trace.steps.length);
}

function apply() {
  try {
    const keep = Uint32Array.from(parse($("keep").value));
    const out = applyStep($("perm").value, Number($("start").value), Number($("width").value), keep);
    $("step-out").className = "";
    $("step-out").textContent = out;
    $("perm").value = out;
    trace = null;
    const start = Number($("start").value);
    draw(out, [start, start + Number($("width").value) - 1]);
  } catch (e) {
    fail($("step-out"), e);
  }
}

await init();

$("apply").addEventListener("click", apply);
$("build").addEventListener("click", build);
$("frame").addEventListener("input", (e) => showFrame(Number(e.target.value)));
$("rand").addEventListener("click", () => {
  $("perm").value = randomPermutation(Number($("rand-n").value), Number($("rand-seed").value));
  build();
});
$("reverse").addEventListener("click", () => {
  const n = Number($("rand-n").value);
  $("perm").value = Array.from({ length: n }, (_, i) => n - i).join(",");
  build();
});
$("perm").addEventListener("change", build);

build();
