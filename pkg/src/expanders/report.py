"""Delimited output and figure rendering for experiment reports.

CSV is the primary machine format (columns n,size,bound,ratio, preceded by
comment lines echoing the tool version and run configuration); a log-log
figure of the same data can be rendered next to it.  Output bytes contain
nothing nondeterministic, so identical runs produce identical files.
"""

from __future__ import annotations

import io
from typing import Mapping, Optional

from .expansion import ExpansionReport


def report_csv(report: ExpansionReport, config_line: str = "") -> str:
    buf = io.StringIO()
    buf.write(f"# experiment={report.name}\n")
    if config_line:
        buf.write(f"# {config_line}\n")
    buf.write(f"# target_exponent={report.target_exponent}\n")
    buf.write(f"# fitted_exponent={report.fitted_exponent}\n")
    buf.write(f"# fitted_constant={report.fitted_constant}\n")
    for note in report.notes:
        buf.write(f"# note={note}\n")
    buf.write("n,size,bound,ratio\n")
    for n, size, bound, ratio in report.rows():
        buf.write(f"{n},{size},{bound:.6g},{ratio:.6g}\n")
    return buf.getvalue()


def render_figure(report: ExpansionReport, path: str):
    """Log-log scatter of the samples, the fitted slope, and the target
    slope, written to an image file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ns = [n for n, _ in report.samples]
    sizes = [s for _, s in report.samples]
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.loglog(ns, sizes, "o", color="tab:blue", label="measured")
    if ns:
        c = float(report.fitted_constant)
        m = float(report.fitted_exponent)
        ax.loglog(ns, [c * n**m for n in ns], "-", color="tab:blue", alpha=0.6,
                  label=f"fit: slope {m:.3f}")
        t = float(report.target_exponent)
        anchor = sizes[0] / ns[0] ** t
        ax.loglog(ns, [anchor * n**t for n in ns], "--", color="tab:gray",
                  label=f"target slope {t:.3f}")
    ax.set_xlabel("n")
    ax.set_ylabel("measured size")
    ax.set_title(report.name)
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
