#include "hsi/evalviz/metrics.hpp"

#include <cstdio>
#include <ostream>
#include <vector>

#include "hsi/error.hpp"
#include "hsi/parallel.hpp"

namespace hsi::evalviz {

void ConfusionMatrix::add(TissueClass truth, TissueClass predicted, int64_t n) {
    if (!is_classifiable(truth) || !is_classifiable(predicted)) {
        throw ContractError("ConfusionMatrix: Unlabeled is not a matrix class");
    }
    cells[static_cast<size_t>(static_cast<int>(truth) - 1) * kNumTissueClasses +
          (static_cast<int>(predicted) - 1)] += n;
}

int64_t ConfusionMatrix::total() const {
    int64_t sum = 0;
    for (int64_t c : cells) sum += c;
    return sum;
}

int64_t ConfusionMatrix::trace() const {
    int64_t sum = 0;
    for (int i = 0; i < kNumTissueClasses; ++i) sum += at(i, i);
    return sum;
}

int64_t ConfusionMatrix::row_sum(int true_idx) const {
    int64_t sum = 0;
    for (int j = 0; j < kNumTissueClasses; ++j) sum += at(true_idx, j);
    return sum;
}

int64_t ConfusionMatrix::col_sum(int pred_idx) const {
    int64_t sum = 0;
    for (int i = 0; i < kNumTissueClasses; ++i) sum += at(i, pred_idx);
    return sum;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    for (size_t i = 0; i < cells.size(); ++i) cells[i] += other.cells[i];
    return *this;
}

ClassMetrics metrics_from_matrix(const ConfusionMatrix& matrix) {
    ClassMetrics metrics;
    const int64_t total = matrix.total();
    for (int c = 0; c < kNumTissueClasses; ++c) {
        ClassCounts& counts = metrics.per_class[static_cast<size_t>(c)];
        counts.tp = matrix.at(c, c);
        counts.fn = matrix.row_sum(c) - counts.tp;
        counts.fp = matrix.col_sum(c) - counts.tp;
        counts.tn = total - counts.tp - counts.fn - counts.fp;
    }
    metrics.overall_accuracy =
        total == 0 ? 0.0 : static_cast<double>(matrix.trace()) / static_cast<double>(total);
    return metrics;
}

void StreamingMetrics::add(TissueClass truth, TissueClass predicted) {
    if (!is_classifiable(truth) || !is_classifiable(predicted)) {
        throw ContractError("StreamingMetrics: Unlabeled is not a metric class");
    }
    ++samples_;
    if (truth == predicted) ++correct_;
    for (int c = 1; c <= kNumTissueClasses; ++c) {
        ClassCounts& counts = counts_[static_cast<size_t>(c - 1)];
        const bool is_true = static_cast<int>(truth) == c;
        const bool is_pred = static_cast<int>(predicted) == c;
        if (is_true && is_pred) {
            ++counts.tp;
        } else if (is_true) {
            ++counts.fn;
        } else if (is_pred) {
            ++counts.fp;
        } else {
            ++counts.tn;
        }
    }
}

void StreamingMetrics::merge(const StreamingMetrics& other) {
    samples_ += other.samples_;
    correct_ += other.correct_;
    for (size_t c = 0; c < counts_.size(); ++c) {
        counts_[c].tp += other.counts_[c].tp;
        counts_[c].fn += other.counts_[c].fn;
        counts_[c].fp += other.counts_[c].fp;
        counts_[c].tn += other.counts_[c].tn;
    }
}

ClassMetrics StreamingMetrics::finish() const {
    ClassMetrics metrics;
    metrics.per_class = counts_;
    metrics.overall_accuracy =
        samples_ == 0 ? 0.0 : static_cast<double>(correct_) / static_cast<double>(samples_);
    return metrics;
}

std::pair<ConfusionMatrix, ClassMetrics> evaluate_patches(const model::Conv3dNet& net,
                                                          const dataset::PatchSet& eval_set,
                                                          int threads) {
    if (eval_set.empty()) throw ContractError("evaluate_patches: empty evaluation set");
    const int64_t n = static_cast<int64_t>(eval_set.size());
    std::vector<uint8_t> predictions(static_cast<size_t>(n));
    parallel_for(0, n, threads, [&](int64_t lo, int64_t hi) {
        model::Workspace<float> ws;
        for (int64_t i = lo; i < hi; ++i) {
            const dataset::Patch& p = eval_set.patches[static_cast<size_t>(i)];
            model::forward(net, ws, std::span<const float>(p.data));
            predictions[static_cast<size_t>(i)] =
                static_cast<uint8_t>(model::predicted_class(ws) + 1);
        }
    });
    ConfusionMatrix matrix;
    StreamingMetrics streaming;
    for (int64_t i = 0; i < n; ++i) {
        const TissueClass truth = eval_set.patches[static_cast<size_t>(i)].label;
        const TissueClass pred = static_cast<TissueClass>(predictions[static_cast<size_t>(i)]);
        matrix.add(truth, pred);
        streaming.add(truth, pred);
    }
    return {matrix, streaming.finish()};
}

void write_metrics_report(const ConfusionMatrix& matrix, const ClassMetrics& metrics,
                          std::ostream& out) {
    (void)matrix;
    char buf[160];
    for (int c = 0; c < kNumTissueClasses; ++c) {
        const ClassCounts& counts = metrics.per_class[static_cast<size_t>(c)];
        std::snprintf(buf, sizeof(buf), "%s,%lld,%lld,%lld,%lld,%.6f,%.6f\n",
                      to_string(static_cast<TissueClass>(c + 1)),
                      static_cast<long long>(counts.tp), static_cast<long long>(counts.fn),
                      static_cast<long long>(counts.fp), static_cast<long long>(counts.tn),
                      counts.sensitivity(), counts.specificity());
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "overall_accuracy,%.6f\n", metrics.overall_accuracy);
    out << buf;
}

void write_confusion_table(const ConfusionMatrix& matrix, std::ostream& out) {
    char buf[64];
    out << "true\\pred";
    for (int j = 0; j < kNumTissueClasses; ++j) {
        std::snprintf(buf, sizeof(buf), "%10s", to_string(static_cast<TissueClass>(j + 1)));
        out << buf;
    }
    out << '\n';
    for (int i = 0; i < kNumTissueClasses; ++i) {
        std::snprintf(buf, sizeof(buf), "%-9s", to_string(static_cast<TissueClass>(i + 1)));
        out << buf;
        for (int j = 0; j < kNumTissueClasses; ++j) {
            std::snprintf(buf, sizeof(buf), "%10lld", static_cast<long long>(matrix.at(i, j)));
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace hsi::evalviz
