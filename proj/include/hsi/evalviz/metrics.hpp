#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <utility>

#include "hsi/dataset/patch.hpp"
#include "hsi/model/net.hpp"
#include "hsi/types.hpp"

namespace hsi::evalviz {

/// 5x5 counts, rows = true class, columns = predicted class (codes 1..5).
struct ConfusionMatrix {
    std::array<int64_t, kNumTissueClasses * kNumTissueClasses> cells{};

    void add(TissueClass truth, TissueClass predicted, int64_t n = 1);
    int64_t at(int true_idx, int pred_idx) const {
        return cells[static_cast<size_t>(true_idx) * kNumTissueClasses + pred_idx];
    }
    int64_t total() const;
    int64_t trace() const;
    int64_t row_sum(int true_idx) const;
    int64_t col_sum(int pred_idx) const;

    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

struct ClassCounts {
    int64_t tp = 0, fn = 0, fp = 0, tn = 0;

    double sensitivity() const { return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn); }
    double specificity() const { return tn + fp == 0 ? 0.0 : static_cast<double>(tn) / (tn + fp); }
};

struct ClassMetrics {
    std::array<ClassCounts, kNumTissueClasses> per_class{};
    double overall_accuracy = 0.0;
};

/// One-vs-rest counts and trace/total accuracy derived from the matrix.
ClassMetrics metrics_from_matrix(const ConfusionMatrix& matrix);

/// Streaming accumulator: maintains the per-class counters and per-sample
/// correctness directly, without going through the matrix. The two routes must
/// agree exactly; the acceptance suite checks that identity.
class StreamingMetrics {
public:
    void add(TissueClass truth, TissueClass predicted);
    void merge(const StreamingMetrics& other);
    ClassMetrics finish() const;
    int64_t count() const { return samples_; }

private:
    std::array<ClassCounts, kNumTissueClasses> counts_{};
    int64_t samples_ = 0;
    int64_t correct_ = 0;
};

/// Argmax classification of every patch in the set.
std::pair<ConfusionMatrix, ClassMetrics> evaluate_patches(const model::Conv3dNet& net,
                                                          const dataset::PatchSet& eval_set,
                                                          int threads = 1);

/// Machine-readable block: one "class,tp,fn,fp,tn,sensitivity,specificity"
/// line per class plus a final "overall_accuracy,<value>" line.
void write_metrics_report(const ConfusionMatrix& matrix, const ClassMetrics& metrics,
                          std::ostream& out);

/// Fixed-width human-readable confusion table.
void write_confusion_table(const ConfusionMatrix& matrix, std::ostream& out);

}  // namespace hsi::evalviz
