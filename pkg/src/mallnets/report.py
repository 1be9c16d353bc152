"""PNG charts for the commutation matrix and class-count experiments."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from mallnets import commute as cm  # noqa: E402

GLYPH = {cm.STAR: "▷", cm.MIX: "mix", cm.TENSOR: "⊗", "plus1": "⊕1", "plus2": "⊕2",
         "parr": "⅋", "with": "&"}
LEVEL = {None: 0, cm.ALWAYS: 1, cm.CONDITIONAL: 2, cm.DUPLICATING: 3}
COLORS = ["#dddddd", "#7fbf7f", "#f2c14e", "#d9534f"]
TEXT = {None: "?", cm.ALWAYS: "yes", cm.CONDITIONAL: "cond", cm.DUPLICATING: "dup"}


def matrix_heatmap(matrix, path, order=cm.MATRIX_ORDER):
    """Rows are the lower rule, columns the upper rule."""
    grid = [[LEVEL[matrix.get((lo, up))] for up in order] for lo in order]
    fig, ax = plt.subplots(figsize=(6, 5.2))
    ax.imshow(grid, cmap=ListedColormap(COLORS), vmin=0, vmax=3)
    ax.set_xticks(range(len(order)), [GLYPH[k] for k in order])
    ax.set_yticks(range(len(order)), [GLYPH[k] for k in order])
    ax.set_xlabel("upper rule")
    ax.set_ylabel("lower rule")
    for i, lo in enumerate(order):
        for j, up in enumerate(order):
            ax.text(j, i, TEXT[matrix.get((lo, up))], ha="center", va="center", fontsize=8)
    ax.set_title("rule commutation over the matrix corpus")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def class_count_chart(counts, path, labels=("cut-linking classes", "commutation classes"),
                      title="classes per sequent"):
    """Grouped bars, one group per sequent; ``counts`` maps a sequent name
    to a pair of class counts."""
    names = sorted(counts)
    xs = range(len(names))
    a = [counts[n][0] for n in names]
    b = [counts[n][1] for n in names]
    fig, ax = plt.subplots(figsize=(max(6, 0.25 * len(names)), 4))
    ax.bar([x - 0.2 for x in xs], a, width=0.4, label=labels[0])
    ax.bar([x + 0.2 for x in xs], b, width=0.4, label=labels[1])
    ax.set_xticks(list(xs), names if len(names) <= 30 else [""] * len(names),
                  rotation=90, fontsize=6)
    ax.set_ylabel("classes")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def catalogue_chart(diffs, path):
    """Generated vs transcribed commutation counts per configuration."""
    names = [f"{d.system}{'+mix' if d.mix else ''}" for d in diffs]
    counts = {n: (d.expected, d.generated - len(d.folded)) for n, d in zip(names, diffs)}
    return class_count_chart(counts, path, ("transcribed", "generated, unfolded"),
                             "commutation catalogue")
