# %% [markdown]
# # Windows next to panel size and overtime
#
# A clinic can also pick its panel size ``lam`` and buy capacity ``mu`` above
# the regular 20 at cost ``a (mu - 20)^2``. Once those are set, how much does
# a window still add? And does choosing all three together beat choosing them
# in turn? Runtime is a few minutes.

# %%
from noshow_window import published
from noshow_window.experiments import joint_grid, joint_summary, levers_grid, load_config

cfg = load_config()
recs = levers_grid(cfg, models=["K0.2", "K0.4", "K0.6"], overtime_a=[0.2])
idx = {(r["theta"], r["xi"], r["model"], r["group"]): r for r in recs}
for theta, xi in cfg.scenarios:
    for m in ("K0.2", "K0.4", "K0.6"):
        cells = [idx[(theta, xi, m, g)] for g in published.LEVER_GROUPS]
        pub = published.LEVERS[(theta, xi, m)]
        print(f"({theta:g},{xi:g}) {m}  "
              + "  ".join(f"{c['delta_e']:.2f}/{c['alpha']:.2f}" for c in cells)
              + "   published " + " ".join(f"{x:.2f}" for x in pub))

# %% [markdown]
# Each group shows gain in percent and the service level (chance that at most
# ``K*`` patients are waiting). Without rejection prices a window adds a
# fraction of a percent. Pricing rejections makes the best window so wide
# that it almost never binds.

# %%
jrecs = joint_grid(cfg)
for r in jrecs:
    s, j = r["sequential"], r["joint"]
    print(f"({r['theta']:g},{r['xi']:g}) {r['model']}: sequential K={s['k']} "
          f"joint lam={j['lam']:g} mu={j['mu']:g} K={j['k']}  gain {r['gain_percent']:.2f}%")
print(joint_summary(jrecs))

# %% [markdown]
# Choosing the window together with panel size gains a little when rejections
# are free, because a tight window lets the clinic take on a larger panel.
# With a rejection price the joint optimum is the sequential one.
