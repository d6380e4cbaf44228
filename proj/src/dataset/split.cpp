#include "hsi/dataset/split.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <tuple>

#include "hsi/error.hpp"
#include "hsi/rng.hpp"

namespace hsi::dataset {

namespace {

constexpr int64_t kSharePercent = 12;        // >= 12% of each class in eval
constexpr size_t kExhaustiveLimit = 20000;   // combination budget

struct Fraction {
    int64_t num = 0;
    int64_t den = 1;

    bool operator<(const Fraction& other) const { return num * other.den < other.num * den; }
};

uint64_t choose(uint64_t n, uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    uint64_t result = 1;
    for (uint64_t i = 1; i <= k; ++i) {
        // Safe at the scales used here (n <= a few hundred before the cap hits).
        result = result * (n - k + i) / i;
        if (result > 10 * kExhaustiveLimit) return result;
    }
    return result;
}

}  // namespace

bool SplitPlan::is_eval_subject(int subject) const {
    return std::binary_search(eval_subjects.begin(), eval_subjects.end(), subject);
}

SplitPlan plan_split(const PatchSet& patches, int n_eval_subjects, uint64_t seed) {
    if (patches.empty()) throw ContractError("plan_split: empty patch set");
    if (n_eval_subjects < 1) throw ContractError("plan_split: need at least one eval subject");

    const auto subjects = patches.subjects();
    const int n_subjects = static_cast<int>(subjects.size());
    if (n_subjects < n_eval_subjects + 1) {
        throw ContractError("plan_split: need at least " + std::to_string(n_eval_subjects + 1) +
                            " distinct subjects, got " + std::to_string(n_subjects));
    }

    const auto by_subject = patches.per_subject_histogram();
    const auto totals = patches.class_histogram();

    // Evaluate one subject combination; returns feasibility plus the worst
    // per-class share as an exact fraction.
    auto assess = [&](const std::vector<int>& combo, std::array<int64_t, 6>& eval_counts,
                      Fraction& worst) {
        eval_counts.fill(0);
        for (int s : combo) {
            const auto it = by_subject.find(s);
            for (int c = 1; c <= kNumTissueClasses; ++c) {
                eval_counts[static_cast<size_t>(c)] += it->second[static_cast<size_t>(c)];
            }
        }
        worst = {0, 1};
        bool feasible = true;
        for (int c = 1; c <= kNumTissueClasses; ++c) {
            const int64_t total = totals[static_cast<size_t>(c)];
            if (total == 0) continue;  // class absent from the data entirely
            const int64_t in_eval = eval_counts[static_cast<size_t>(c)];
            if (in_eval * 100 < kSharePercent * total) feasible = false;
            if (in_eval >= total) feasible = false;  // class would vanish from training
            const Fraction share{in_eval, total};
            if (worst < share) worst = share;
        }
        return feasible;
    };

    std::vector<std::vector<int>> combos;
    const uint64_t n_combos = choose(static_cast<uint64_t>(n_subjects),
                                     static_cast<uint64_t>(n_eval_subjects));
    if (n_combos <= kExhaustiveLimit) {
        // Lexicographic enumeration over sorted subject ids.
        std::vector<int> idx(static_cast<size_t>(n_eval_subjects));
        std::iota(idx.begin(), idx.end(), 0);
        for (;;) {
            std::vector<int> combo;
            for (int i : idx) combo.push_back(subjects[static_cast<size_t>(i)]);
            combos.push_back(std::move(combo));
            int pos = n_eval_subjects - 1;
            while (pos >= 0 && idx[static_cast<size_t>(pos)] == n_subjects - n_eval_subjects + pos) {
                --pos;
            }
            if (pos < 0) break;
            ++idx[static_cast<size_t>(pos)];
            for (int i = pos + 1; i < n_eval_subjects; ++i) {
                idx[static_cast<size_t>(i)] = idx[static_cast<size_t>(i - 1)] + 1;
            }
        }
    } else {
        Rng rng = Rng::derived(seed, /*stream=*/11);
        std::vector<int> pool(subjects);
        for (size_t draw = 0; draw < kExhaustiveLimit; ++draw) {
            // Partial Fisher-Yates: the first n_eval entries become the draw.
            for (int i = 0; i < n_eval_subjects; ++i) {
                const size_t j = static_cast<size_t>(i) +
                                 static_cast<size_t>(rng.below(static_cast<uint64_t>(n_subjects - i)));
                std::swap(pool[static_cast<size_t>(i)], pool[j]);
            }
            std::vector<int> combo(pool.begin(), pool.begin() + n_eval_subjects);
            std::sort(combo.begin(), combo.end());
            combos.push_back(std::move(combo));
        }
    }

    bool found = false;
    std::vector<int> best_combo;
    Fraction best_worst{1, 1};
    std::array<int64_t, 6> best_counts{};
    std::array<Fraction, 6> best_achievable{};  // per class, for the error report
    for (const auto& combo : combos) {
        std::array<int64_t, 6> counts{};
        Fraction worst;
        const bool feasible = assess(combo, counts, worst);
        for (int c = 1; c <= kNumTissueClasses; ++c) {
            const int64_t total = totals[static_cast<size_t>(c)];
            if (total == 0) continue;
            const Fraction share{counts[static_cast<size_t>(c)], total};
            if (best_achievable[static_cast<size_t>(c)] < share) {
                best_achievable[static_cast<size_t>(c)] = share;
            }
        }
        if (!feasible) continue;
        if (!found || worst < best_worst) {
            found = true;
            best_worst = worst;
            best_combo = combo;
            best_counts = counts;
        }
    }

    if (!found) {
        std::string msg = "plan_split: no subject combination reaches a 12% evaluation share "
                          "for every class; best achievable shares:";
        for (int c = 1; c <= kNumTissueClasses; ++c) {
            const int64_t total = totals[static_cast<size_t>(c)];
            char buf[64];
            const Fraction f = best_achievable[static_cast<size_t>(c)];
            std::snprintf(buf, sizeof(buf), " %s=%.3f",
                          to_string(static_cast<TissueClass>(c)),
                          total == 0 ? 0.0
                                     : static_cast<double>(f.num) / static_cast<double>(f.den));
            msg += buf;
        }
        throw ValidationError(msg);
    }

    SplitPlan plan;
    plan.eval_subjects = best_combo;
    std::sort(plan.eval_subjects.begin(), plan.eval_subjects.end());
    plan.seed = seed;
    for (int c = 1; c <= kNumTissueClasses; ++c) {
        const int64_t total = totals[static_cast<size_t>(c)];
        plan.eval_share[static_cast<size_t>(c)] =
            total == 0 ? 0.0
                       : static_cast<double>(best_counts[static_cast<size_t>(c)]) /
                             static_cast<double>(total);
    }
    return plan;
}

SplitIndices apply_split(const PatchSet& patches, const SplitPlan& plan) {
    // Canonical order makes the shuffle independent of how the set was
    // assembled.
    std::vector<size_t> order(patches.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const Patch& pa = patches.patches[a];
        const Patch& pb = patches.patches[b];
        return std::tie(pa.subject_id, pa.scene_id, pa.row, pa.col) <
               std::tie(pb.subject_id, pb.scene_id, pb.row, pb.col);
    });

    SplitIndices out;
    std::vector<size_t> rest;
    for (size_t i : order) {
        if (plan.is_eval_subject(patches.patches[i].subject_id)) {
            out.eval.push_back(i);
        } else {
            rest.push_back(i);
        }
    }

    Rng rng = Rng::derived(plan.seed, /*stream=*/12);
    rng.shuffle(std::span<size_t>(rest));
    const size_t n_train =
        static_cast<size_t>(std::floor(plan.train_fraction * static_cast<double>(rest.size())));
    out.train.assign(rest.begin(), rest.begin() + static_cast<ptrdiff_t>(n_train));
    out.validation.assign(rest.begin() + static_cast<ptrdiff_t>(n_train), rest.end());
    return out;
}

void write_split_plan(const SplitPlan& plan, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "seed=" << plan.seed << "\n";
    out << "train_fraction=" << plan.train_fraction << "\n";
    out << "eval_subjects=";
    for (size_t i = 0; i < plan.eval_subjects.size(); ++i) {
        out << (i ? "," : "") << plan.eval_subjects[i];
    }
    out << "\n";
    for (int c = 1; c <= kNumTissueClasses; ++c) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "eval_share_%s=%.6f",
                      to_string(static_cast<TissueClass>(c)),
                      plan.eval_share[static_cast<size_t>(c)]);
        out << buf << "\n";
    }
    if (!out) throw IoError("split plan write failed: " + path.string());
}

SplitPlan read_split_plan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    SplitPlan plan;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError("split plan: malformed line: " + line);
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "seed") {
            plan.seed = std::stoull(value);
        } else if (key == "train_fraction") {
            plan.train_fraction = std::stod(value);
        } else if (key == "eval_subjects") {
            plan.eval_subjects.clear();
            std::istringstream ss(value);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                if (!tok.empty()) plan.eval_subjects.push_back(std::stoi(tok));
            }
            std::sort(plan.eval_subjects.begin(), plan.eval_subjects.end());
        }
        // eval_share_* lines are informational; recomputed when applied.
    }
    if (plan.eval_subjects.empty()) {
        throw FormatError("split plan: missing eval_subjects: " + path.string());
    }
    return plan;
}

}  // namespace hsi::dataset
