"""CSV and JSON rendering of spectra, sweeps and crossing reports."""
import csv
import io
import json
import math
from importlib.resources import files

CSV_COLUMNS = (
    "j2", "level", "energy", "degeneracy", "c_nn", "c_nnn", "dg_nn", "dg_nnn", "qd_nn", "qd_nnn",
    "sl_nn", "f_nn", "f_nnn", "e1_nn", "e1_nnn", "total_f", "exe", "flags",
)


def fmt(x):
    """12 significant digits, '.' decimal point, NA for missing values."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "NA"
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    return format(float(x), ".12g")


def _num_or_null(x):
    x = float(x)
    return None if math.isnan(x) else x


def sweep_csv(table):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in table.rows:
        cells = []
        for col in CSV_COLUMNS:
            v = getattr(r, col)
            if col == "level":
                cells.append(v)
            elif col == "flags":
                cells.append(";".join(v))
            else:
                cells.append(fmt(v))
        w.writerow(cells)
    return buf.getvalue()


def spectrum_doc(spec, spectrum):
    return {
        "n_sites": spec.n_sites,
        "j2": spec.j2,
        "levels": [
            {
                "index": i,
                "energy": lv.energy,
                "degeneracy": lv.degeneracy,
                "branches": lv.branches,
                "total_spin": lv.total_spin,
                "sector_tags": sorted(int(t) for t in lv.sector_tags),
            }
            for i, lv in enumerate(spectrum.levels)
        ],
    }


def crossings_doc(table, reports):
    return {
        "n_sites": table.n_sites,
        "j2_min": float(table.j2[0]),
        "j2_max": float(table.j2[-1]),
        "steps": len(table.j2),
        "crossings": [
            {
                "kind": r.kind,
                "j2_location": r.j2_location,
                "resolution": r.resolution,
                "level": r.level,
                "magnitude": _num_or_null(r.magnitude),
            }
            for r in reports
        ],
    }


def sweep_doc(table, reports, config=None):
    rows = []
    for r in table.rows:
        row = {c: (getattr(r, c) if c in ("level", "flags", "degeneracy") else _num_or_null(getattr(r, c)))
               for c in CSV_COLUMNS}
        row["fh_c_nn"] = _num_or_null(r.fh_c_nn)
        row["fh_c_nnn"] = _num_or_null(r.fh_c_nnn)
        rows.append(row)
    doc = {"columns": list(CSV_COLUMNS), "rows": rows, "summary": crossings_doc(table, reports)}
    if config is not None:
        doc["config"] = config
    return doc


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


PLOT_STUB = '''"""Plot the sweep written to {csv_name} (generated stub; edit freely)."""
import matplotlib.pyplot as plt
import pandas as pd

df = pd.read_csv("{csv_name}", na_values="NA")
fig, axes = plt.subplots(2, 2, figsize=(9, 7), sharex=True)
for level, grp in df.groupby("level"):
    axes[0, 0].plot(grp.j2, grp.energy, label=level)
    axes[0, 1].plot(grp.j2, grp.dg_nn, label=level)
    axes[1, 0].plot(grp.j2, grp.f_nn, label=f"f_nn {{level}}")
    axes[1, 0].plot(grp.j2, grp.e1_nn, "--", label=f"E1_nn {{level}}")
    axes[1, 1].plot(grp.j2, grp.dg_nn.diff() / grp.j2.diff(), label=level)
for ax, title in zip(axes.flat, ["energy", "NN geometric discord", "frustration", "d(dg_nn)/dJ2"]):
    ax.set_title(title)
    ax.legend()
for ax in axes[1]:
    ax.set_xlabel("J2 / J1")
plt.tight_layout()
plt.show()
'''


def plot_stub(csv_name):
    return PLOT_STUB.format(csv_name=csv_name)


def load_schema(name):
    """Shipped JSON schema for ``spectrum``, ``sweep``, ``crossings`` or ``config`` documents."""
    return json.loads(files(__package__).joinpath("schemas", f"{name}.schema.json").read_text())
