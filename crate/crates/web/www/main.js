import init, { klein_polygons_svg, cf1d_report, palindromic_certificate } from "./pkg/klein_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function show(out, f, asHtml) {
  out.classList.remove("error");
  try {
    const r = f();
    if (asHtml) out.innerHTML = r; else out.textContent = r;
  } catch (e) {
    out.classList.add("error");
    out.textContent = String(e);
  }
}

await init();

const polygons = () =>
  show($("poly-out"), () => klein_polygons_svg($("poly-input").value, num("poly-count"), num("poly-extent")), true);
const cf = () => show($("cf-out"), () => cf1d_report($("cf-input").value, num("cf-height")));
const sym = () => show($("sym-out"), () => palindromic_certificate($("sym-input").value, num("sym-depth")));

$("poly-run").onclick = polygons;
$("cf-run").onclick = cf;
$("sym-run").onclick = sym;
polygons();
cf();
