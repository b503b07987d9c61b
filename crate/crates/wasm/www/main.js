import init, { tTest, fMap, residualPlot } from "./pkg/nullform_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const fmt = (v) => (typeof v === "number" ? Number(v.toPrecision(7)).toString() : String(v));

function table(rows) {
  const head = "<tr><th></th><th>traditional</th><th>null form</th></tr>";
  const body = rows.map(([k, a, b]) => `<tr><th>${k}</th><td>${fmt(a)}</td><td>${fmt(b)}</td></tr>`).join("");
  return `<table>${head}${body}</table>`;
}

function guard(out, fn) {
  try {
    fn();
  } catch (e) {
    out.innerHTML = `<p class="error">${e.message ?? e}</p>`;
  }
}

function runT() {
  guard($("t-out"), () => {
    const v = JSON.parse(tTest($("t-values").value, num("t-mu0"), num("t-alpha")));
    const r = v.result;
    $("t-out").innerHTML = table([
      ["statistic", r.t, r.t0],
      ["p-value", r.p_value_t, r.p_value_t0],
      ["critical", v.critical_t, v.critical_t0],
      ["reject", v.reject_t, v.reject_t0],
    ]) + `<p>n = ${r.n}, R = ${fmt(r.r_ratio)}, cos&sup2;&theta; = ${fmt(r.cos2_theta)}</p>`;
    $("t-curve").innerHTML = v.curve_svg;
  });
}

function runF() {
  guard($("f-out"), () => {
    const v = JSON.parse(fMap(num("f-null"), num("f-n"), num("f-p1"), num("f-p2"), num("f-alpha")));
    $("f-out").innerHTML = table([
      ["statistic", v.f_trad, v.f_null],
      ["p-value", v.p_value_f, v.p_value_beta],
      ["critical", v.critical_f_trad, v.critical_f_null],
    ]) + `<p>reject: ${v.reject}</p>`;
  });
}

function runR() {
  guard($("r-out"), () => {
    $("r-out").innerHTML = residualPlot($("r-data").value, num("r-alpha"));
  });
}

await init();
for (const [ids, fn] of [
  [["t-values", "t-mu0", "t-alpha"], runT],
  [["f-null", "f-n", "f-p1", "f-p2", "f-alpha"], runF],
  [["r-data", "r-alpha"], runR],
]) {
  ids.forEach((id) => $(id).addEventListener("input", fn));
  fn();
}
