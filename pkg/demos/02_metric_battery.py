"""Compute the metric battery on one discipline and read a few rows."""

from scimetrics import (
    GeneratorConfig,
    build_metric_matrix,
    chronometrics,
    citation_count,
    generate,
    h_index,
)

corpus = generate(GeneratorConfig(seed=7, n_units=30, authors_per_unit=3,
                                  papers_per_author=4)).corpus

matrix = build_metric_matrix(corpus, "disc00")
print(f"{matrix.level}-level battery: {len(matrix.row_ids)} rows x "
      f"{len(matrix.metric_names)} metrics")
print("columns:", ", ".join(matrix.metric_names))

# top units by raw citation count
col = matrix.metric_names.index("citation_count")
order = sorted(range(len(matrix.row_ids)), key=lambda i: -matrix.values[i, col])
print("\ntop units by citations:")
for i in order[:5]:
    print(f"  {matrix.row_ids[i]:8s} {matrix.values[i, col]:6.0f}")

# the same battery sliced by author pools instead of unit pools
authors = build_metric_matrix(corpus, "disc00", level="author")
print(f"\nauthor-level battery: {len(authors.row_ids)} rows")

aid = max(authors.row_ids, key=lambda a: h_index(corpus, a))
print(f"best h-index: {aid} with h={h_index(corpus, aid)}")

# chronometrics summarize one entity's citation time course
top_paper = max(corpus.papers, key=lambda p: citation_count(corpus, p))
c = chronometrics(corpus, top_paper)
print(f"\nmost cited paper is {top_paper} "
      f"({citation_count(corpus, top_paper)} citations)")
print(f"  age {c.age_years:.1f}y, growth {c.growth_slope:+.2f}/y, "
      f"latency to peak {c.latency_to_peak_years}y, decay {c.decay_rate:.3f}")

# download chronometrics use the same descriptors on the usage series
d = chronometrics(corpus, top_paper, source="downloads")
print(f"  download series: growth {d.growth_slope:+.2f}/y, "
      f"latency {d.latency_to_peak_years}y")
