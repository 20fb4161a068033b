"""Figure rendering for the report path: one PNG next to each table."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render"]


def _column(table, name):
    return [row[name] for row in table.rows]


def _sweep_axis(table, candidates):
    """First candidate column that actually varies across the rows."""
    for name in candidates:
        values = _column(table, name)
        if len(set(values)) > 1:
            return name, values
    name = candidates[0]
    return name, _column(table, name)


def _plot_overlap_table(table, path):
    x_name, x = _sweep_axis(table, ("k", "T"))
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(6.0, 5.5))
    top.plot(x, _column(table, "log_overlap"), "o-", ms=3, color="tab:blue")
    top.set_ylabel("log branch overlap")
    bottom.plot(x, _column(table, "norm_distance"), "o-", ms=3, color="tab:red",
                label="norm distance")
    bottom.plot(x, _column(table, "off_diagonal_magnitude"), "s--", ms=3,
                color="tab:green", label="off-diagonal")
    bottom.set_xlabel(x_name)
    bottom.legend(loc="center right", fontsize=8)
    for ax in (top, bottom):
        ax.grid(alpha=0.3)
    fig.suptitle(table.experiment)
    _save(fig, path)


def _plot_pointer(table, path):
    x_name, x = _sweep_axis(table, ("rho", "T", "k"))
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(6.0, 5.5))
    top.plot(x, _column(table, "re_chi_plus"), "-", color="tab:blue", label="Re chi(+)")
    top.plot(x, _column(table, "im_chi_plus"), "-", color="tab:orange", label="Im chi(+)")
    top.plot(x, _column(table, "re_chi_minus"), "--", color="tab:cyan", label="Re chi(-)")
    top.set_ylabel("characteristic function")
    top.legend(loc="upper right", fontsize=8)
    bottom.plot(x, _column(table, "s_z_readout"), "o-", ms=3, color="tab:red")
    bottom.set_ylabel("spin readout")
    bottom.set_xlabel(x_name)
    for ax in (top, bottom):
        ax.grid(alpha=0.3)
    fig.suptitle(table.experiment)
    _save(fig, path)


def _plot_entropy(table, path):
    x_name, x = _sweep_axis(table, ("alpha2", "k"))
    column = "S_mixture" if "S_mixture" in table.fieldnames else "s_post_mixture"
    per_site = "per_site" if "per_site" in table.fieldnames else "per_site_post_mixture"
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(x, _column(table, column), "o-", ms=3, label="mixture entropy")
    ax.plot(x, _column(table, per_site), "s--", ms=3, label="per site")
    ax.set_xlabel(x_name)
    ax.set_ylabel("entropy (nats)")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.suptitle(table.experiment)
    _save(fig, path)


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


_RENDERERS = {
    "decoherence-curve": _plot_overlap_table,
    "scaling-study": _plot_overlap_table,
    "pointer": _plot_pointer,
    "entropy": _plot_entropy,
    "collapse-audit": _plot_entropy,
}


def render(table, path) -> None:
    """Write the PNG for an experiment table."""
    _RENDERERS[table.experiment](table, path)
