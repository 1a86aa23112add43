"""Pin a suspect predictor to zero and measure what the fit gives up.

Funding feeds the planted quality signal here, so removing it must cost
R^2. On a corpus where a metric is pure bias the same constraint would be
nearly free. The delta is the decision aid.
"""

from scimetrics import (
    GeneratorConfig,
    build_metric_matrix,
    constrained_refit,
    fit_regression,
    generate,
    zscore,
)

LOADINGS = {
    "citation_count": 0.9,
    "download_count": 0.8,
    "prior_funding": 0.5,
    "student_count": 0.15,
}

cfg = GeneratorConfig(seed=23, n_units=250, authors_per_unit=3,
                      papers_per_author=6, latent_loadings=LOADINGS,
                      noise_sigma=0.1, oa_fraction=0.0, dl_cit_coupling=0.0)
corpus = generate(cfg).corpus
criterion = corpus.criteria["disc00"]

matrix = zscore(build_metric_matrix(corpus, "disc00",
                                    metric_names=sorted(LOADINGS))).matrix
model = fit_regression(matrix, criterion)
pinned = constrained_refit(model, matrix, criterion, {"prior_funding": 0.0})

j = model.metric_names.index("prior_funding")
print(f"unconstrained: beta[prior_funding] = {model.beta[j]:+.4f}, "
      f"R^2 = {model.r_squared:.4f}")
print(f"pinned:        beta[prior_funding] = {pinned.beta[j]:+.4f}, "
      f"R^2 = {pinned.r_squared:.4f}")
print(f"\nexact zero after the refit: {pinned.beta[j] == 0.0}")
print(f"fit cost of the constraint: {model.r_squared - pinned.r_squared:.4f}")

# the remaining predictors absorb what the pinned column used to carry
print("\nbeta shifts under the constraint:")
for k, name in enumerate(model.metric_names):
    print(f"  {name:16s} {model.beta[k]:+.4f} -> {pinned.beta[k]:+.4f}")
