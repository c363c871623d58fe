"""Out-of-sample error after feature selection, method by method.

Repeated 10-fold cross-validation on a synthetic dataset with 40
informative features out of 1000.  Each fold solves the SVM on the
training split, selects r=30 features on its support vectors, refits,
and tests on the held-out split.  Repeats are trimmed to keep the demo
under a minute; the bundled CLI runs the full grid (see README).
"""

import numpy as np

from marginsparse.data import gen_synthetic
from marginsparse.pipelines import cv_experiment, feature_frequencies, summarize_cv


def main():
    data = gen_synthetic(n=200, d=1000, k=40, seed=0)
    methods = ("bss", "leverage", "rfe", "rrqr", "uniform")
    cells = cv_experiment(data, methods, 30, folds=10, repeats=3, seed=1,
                          C=1.0, mode="supervised")

    print("mean out-of-sample error, 3x10-fold CV, r=30 of 1000 features:")
    for (method, r), row in summarize_cv(cells).items():
        label = "full data" if r is None else f"{method} r={r}"
        print(f"  {label:<14} {row['mean_error']:.4f} +- {row['std_error']:.4f}")

    freqs = feature_frequencies(cells, data.d)
    print("\nmost frequently selected features (informative set is 1..40):")
    for (method, r), freq in sorted(freqs.items()):
        top = np.argsort(freq, kind="stable")[::-1][:5] + 1
        print(f"  {method:<9} {top.tolist()}")

    print("\nnote: this data is so separable that each fold keeps only ~11")
    print("support vectors, whose row space is mostly noise directions; the")
    print("deterministic method must cover all of them, so its top picks can")
    print("be noise features even while its refit error stays at zero.")


if __name__ == "__main__":
    main()
