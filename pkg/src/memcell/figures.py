"""Figure rendering for the scenario runners.

Every renderer writes one PNG next to the CSV traces and returns its
path. The Agg backend is forced so the CLI works on headless machines.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

STATE_COLOR = "tab:green"
INPUT_COLOR = "tab:olive"
BIT_COLOR = "tab:red"
CURRENT_COLOR = "tab:blue"


def render_hysteresis(traces, path) -> str:
    """i-v loci plus the time-domain view of the lowest-frequency run."""
    fig, (ax_loop, ax_time) = plt.subplots(1, 2, figsize=(9, 3.6))
    for f in sorted(traces):
        tr = traces[f]
        ax_loop.plot(tr.v_m, [i * 1e3 for i in tr.i_m], lw=0.9, label=f"{f:g} Hz")
    ax_loop.set_xlabel("memristor voltage (V)")
    ax_loop.set_ylabel("memristor current (mA)")
    ax_loop.legend(fontsize=8)
    ax_loop.grid(alpha=0.3)

    f0 = min(traces)
    tr = traces[f0]
    ax_time.plot(tr.t, tr.v_in, color=INPUT_COLOR, lw=0.9, label="input (V)")
    ax_time.plot(tr.t, tr.state, color=STATE_COLOR, lw=1.2, label="state (V)")
    ax_time.plot(tr.t, [i * 1e3 for i in tr.i_m], color=CURRENT_COLOR, lw=0.9,
                 label="current (mA)")
    ax_time.set_xlabel("time (s)")
    ax_time.set_title(f"time domain @ {f0:g} Hz", fontsize=9)
    ax_time.legend(fontsize=8)
    ax_time.grid(alpha=0.3)
    return _finish(fig, path)


def render_program(trace, pulse_edges, path) -> str:
    fig, ax = plt.subplots(figsize=(7, 3.2))
    ax.plot(trace.t, trace.v_in, color=INPUT_COLOR, lw=0.8, label="programming pulse (V)")
    ax.plot(trace.t, trace.state, color=STATE_COLOR, lw=1.4, label="stored state (V)")
    for e in pulse_edges:
        ax.axvline(e, color="gray", lw=0.4, alpha=0.4)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("volts")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def render_readwrite(trace, sample_time, reference, path) -> str:
    fig, axes = plt.subplots(3, 1, figsize=(7, 6), sharex=True)
    axes[0].plot(trace.t, trace.v_in, color=INPUT_COLOR, lw=0.9)
    axes[0].set_ylabel("input (V)")
    axes[1].plot(trace.t, trace.state, color=STATE_COLOR, lw=1.2)
    axes[1].axhline(reference, color="gray", ls="--", lw=0.8)
    axes[1].set_ylabel("state (V)")
    axes[2].plot(trace.t, trace.bit_out, color=BIT_COLOR, lw=1.2, drawstyle="steps-post")
    axes[2].set_ylabel("bit out (V)")
    axes[2].set_xlabel("time (s)")
    for ax in axes:
        ax.axvline(sample_time, color="black", lw=0.6, ls=":")
        ax.grid(alpha=0.3)
    return _finish(fig, path)


def render_distortion(traces, initial_state, reference, path) -> str:
    fig, ax = plt.subplots(figsize=(7, 3.2))
    for label, tr in traces.items():
        ax.plot(tr.t, tr.state, lw=1.2, label=label.replace("_", " "))
    ax.axhline(initial_state, color="gray", lw=0.8, ls="--", label="initial state")
    ax.axhline(reference, color="black", lw=0.6, ls=":", label="bit reference")
    ax.set_xlabel("time (s)")
    ax.set_ylabel("state (V)")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def render_sweep(rows, path, reference: float = 2.5) -> str:
    fig, ax = plt.subplots(figsize=(6.5, 3.0))
    states = [r[0] for r in rows]
    bits = [5.0 if r[1] == "high" else 0.0 for r in rows]
    ok = [(r[1] == "high") == r[2] for r in rows]
    colors = ["tab:green" if good else "tab:red" for good in ok]
    ax.scatter(states, bits, c=colors, zorder=3)
    ax.axvline(reference, color="gray", ls="--", lw=0.8)
    ax.set_xlabel("stored state (V)")
    ax.set_ylabel("read bit (V)")
    ax.set_yticks([0, 5])
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def _finish(fig, path) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
