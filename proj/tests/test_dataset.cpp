#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "hsi/dataset/extract.hpp"
#include "hsi/dataset/patch_io.hpp"
#include "hsi/dataset/split.hpp"
#include "hsi/error.hpp"
#include "hsi/rng.hpp"

using namespace hsi;
using namespace hsi::dataset;

namespace {

Hypercube cube41(int h, int w, float fill = 0.5f) {
    return Hypercube(h, w, fuse_bands(BandSet::camera_a(), BandSet::camera_b()).bands,
                     Hypercube::Kind::Reflectance, fill);
}

/// Random patch set with controllable per-subject class counts. Patch data is
/// tiny garbage; only the metadata matters for split logic.
PatchSet metadata_patchset(const std::vector<std::array<int, 6>>& per_subject) {
    PatchSet set;
    for (size_t s = 0; s < per_subject.size(); ++s) {
        for (int c = 1; c <= kNumTissueClasses; ++c) {
            for (int i = 0; i < per_subject[s][static_cast<size_t>(c)]; ++i) {
                Patch p;
                p.data.assign(kPatchValues, 0.0f);
                p.label = static_cast<TissueClass>(c);
                p.subject_id = static_cast<uint16_t>(s + 1);
                p.scene_id = 0;
                p.row = static_cast<uint16_t>(i);
                p.col = static_cast<uint16_t>(c);
                set.patches.push_back(std::move(p));
            }
        }
    }
    return set;
}

}  // namespace

TEST_CASE("a fully labeled clean 100x100 scene yields 49 patches") {
    const Hypercube cube = cube41(100, 100);
    const AnnotationMask mask(100, 100, static_cast<uint8_t>(TissueClass::Muscle));
    ExtractReport report;
    const PatchSet set = extract_patches(cube, mask, BoolMask{}, BoolMask{}, 3, 0, 10, &report);
    // floor((100 - 31) / 10) + 1 = 7 start positions per axis.
    CHECK(set.size() == 49);
    CHECK(report.windows_considered == 49);
    CHECK(report.accepted == 49);
    CHECK(set.class_histogram()[static_cast<size_t>(TissueClass::Muscle)] == 49);
    CHECK(set.patches[0].subject_id == 3);
    // Patch payload is the actual window, pixel spectra contiguous.
    CHECK(set.patches[0].data.size() == kPatchValues);
    CHECK(set.patches[0].data[0] == 0.5f);
}

TEST_CASE("an all-unlabeled mask yields no patches") {
    const Hypercube cube = cube41(100, 100);
    const AnnotationMask mask(100, 100, 0);
    const PatchSet set = extract_patches(cube, mask, BoolMask{}, BoolMask{}, 1, 0);
    CHECK(set.empty());
}

TEST_CASE("windows touching a specular pixel are rejected, by enumeration") {
    const Hypercube cube = cube41(100, 100);
    const AnnotationMask mask(100, 100, static_cast<uint8_t>(TissueClass::Gland));
    BoolMask specular(100, 100);
    specular.set(50, 50, true);
    const PatchSet set = extract_patches(cube, mask, specular, BoolMask{}, 1, 0);

    // Brute-force oracle: enumerate stride-10 windows covering (50, 50).
    int covering = 0;
    for (int r = 0; r + 31 <= 100; r += 10) {
        for (int c = 0; c + 31 <= 100; c += 10) {
            if (r <= 50 && 50 < r + 31 && c <= 50 && 50 < c + 31) ++covering;
        }
    }
    CHECK(covering > 0);
    CHECK(set.size() == 49 - static_cast<size_t>(covering));
    for (const Patch& p : set.patches) {
        CHECK(!(p.row <= 50 && 50 < p.row + 31 && p.col <= 50 && 50 < p.col + 31));
    }
}

TEST_CASE("invalid-fusion pixels are excluded like speculars") {
    const Hypercube cube = cube41(61, 61);
    const AnnotationMask mask(61, 61, static_cast<uint8_t>(TissueClass::Vein));
    BoolMask validity(61, 61, 1);
    for (int r = 0; r < 61; ++r) validity.set(r, 60, false);  // dead column
    const PatchSet set = extract_patches(cube, mask, BoolMask{}, validity, 1, 0);
    // Columns 0..20 start positions stay (c + 31 <= 60 needs c <= 29 -> {0,10,20});
    // column 30 would cover the dead column.
    CHECK(set.size() == 4 * 3);
}

TEST_CASE("mixed-label windows violate purity") {
    const Hypercube cube = cube41(41, 41);
    AnnotationMask mask(41, 41, static_cast<uint8_t>(TissueClass::Skin));
    mask.at(40, 40) = static_cast<uint8_t>(TissueClass::Nerve);
    const PatchSet set = extract_patches(cube, mask, BoolMask{}, BoolMask{}, 1, 0);
    // Start positions {0, 10} per axis; only the (10, 10) window reaches
    // pixel (40, 40).
    CHECK(set.size() == 3);
}

TEST_CASE("extraction demands 41 bands") {
    Hypercube cube(50, 50, BandSet::camera_b(), Hypercube::Kind::Reflectance, 0.1f);
    const AnnotationMask mask(50, 50, 1);
    CHECK_THROWS_AS(extract_patches(cube, mask, BoolMask{}, BoolMask{}, 1, 0), ContractError);
}

TEST_CASE("patch sets round-trip through HSP1") {
    Rng rng(77);
    const Hypercube cube = cube41(61, 61, 0.25f);
    const AnnotationMask mask(61, 61, static_cast<uint8_t>(TissueClass::Nerve));
    PatchSet set = extract_patches(cube, mask, BoolMask{}, BoolMask{}, 9, 2);
    for (auto& p : set.patches) {
        for (auto& v : p.data) v = static_cast<float>(rng.uniform());
    }
    std::stringstream stream;
    write_patchset(set, stream);
    const PatchSet back = read_patchset(stream);
    REQUIRE(back.size() == set.size());
    for (size_t i = 0; i < set.size(); ++i) {
        CHECK(back.patches[i].data == set.patches[i].data);
        CHECK(back.patches[i].label == set.patches[i].label);
        CHECK(back.patches[i].subject_id == set.patches[i].subject_id);
        CHECK(back.patches[i].row == set.patches[i].row);
    }
    std::stringstream bad("HSPX");
    CHECK_THROWS_AS(read_patchset(bad), FormatError);
}

TEST_CASE("symmetric subjects: lowest ids win the split tie") {
    // 4 subjects with identical per-class counts, one eval subject.
    std::vector<std::array<int, 6>> counts(4, {0, 10, 10, 10, 10, 10});
    const PatchSet set = metadata_patchset(counts);
    const SplitPlan plan = plan_split(set, 1, 123);
    REQUIRE(plan.eval_subjects.size() == 1);
    CHECK(plan.eval_subjects[0] == 1);
    for (int c = 1; c <= 5; ++c) {
        CHECK(plan.eval_share[static_cast<size_t>(c)] == doctest::Approx(0.25));
    }
}

TEST_CASE("a class held by a single subject makes the split infeasible") {
    std::vector<std::array<int, 6>> counts = {
        {0, 10, 10, 10, 10, 10},
        {0, 10, 10, 10, 10, 0},
        {0, 10, 10, 10, 10, 0},
        {0, 10, 10, 10, 10, 0},
    };  // Skin exists only for subject 1
    const PatchSet set = metadata_patchset(counts);
    try {
        plan_split(set, 1, 5);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("best achievable") != std::string::npos);
        CHECK(msg.find("Skin") != std::string::npos);
    }
}

TEST_CASE("92/8 split counts follow the floor rule") {
    std::vector<std::array<int, 6>> counts(5, {0, 50, 50, 50, 50, 50});
    const PatchSet set = metadata_patchset(counts);  // 1250 patches
    const SplitPlan plan = plan_split(set, 1, 9);
    const SplitIndices idx = apply_split(set, plan);
    CHECK(idx.eval.size() == 250);
    // 1000 remaining -> floor(0.92 * 1000) = 920 train, 80 validation.
    CHECK(idx.train.size() == 920);
    CHECK(idx.validation.size() == 80);
}

TEST_CASE("split properties over random patch sets") {
    Rng rng(31337);
    for (int trial = 0; trial < 25; ++trial) {
        const int n_subjects = 4 + static_cast<int>(rng.below(6));
        std::vector<std::array<int, 6>> counts(static_cast<size_t>(n_subjects));
        for (auto& row : counts) {
            row[0] = 0;
            for (int c = 1; c <= 5; ++c) row[static_cast<size_t>(c)] = 5 + static_cast<int>(rng.below(40));
        }
        const PatchSet set = metadata_patchset(counts);
        const int n_eval = 1 + static_cast<int>(rng.below(2));
        SplitPlan plan;
        try {
            plan = plan_split(set, n_eval, rng.next_u64());
        } catch (const ValidationError&) {
            continue;  // infeasible are allowed as long as they are reported
        }
        const SplitIndices idx = apply_split(set, plan);

        // Partitions are disjoint and cover the input.
        std::set<size_t> seen;
        for (const auto* part : {&idx.train, &idx.validation, &idx.eval}) {
            for (size_t i : *part) CHECK(seen.insert(i).second);
        }
        CHECK(seen.size() == set.size());

        // Subject exclusivity and the 12% constraint.
        std::set<int> eval_subjects(plan.eval_subjects.begin(), plan.eval_subjects.end());
        for (size_t i : idx.train) {
            CHECK(eval_subjects.count(set.patches[i].subject_id) == 0);
        }
        for (size_t i : idx.validation) {
            CHECK(eval_subjects.count(set.patches[i].subject_id) == 0);
        }
        for (size_t i : idx.eval) {
            CHECK(eval_subjects.count(set.patches[i].subject_id) == 1);
        }
        std::array<int64_t, 6> eval_count{}, total{};
        for (const Patch& p : set.patches) total[static_cast<size_t>(p.label)]++;
        for (size_t i : idx.eval) eval_count[static_cast<size_t>(set.patches[i].label)]++;
        for (int c = 1; c <= 5; ++c) {
            CHECK(eval_count[static_cast<size_t>(c)] * 100 >= 12 * total[static_cast<size_t>(c)]);
            CHECK(eval_count[static_cast<size_t>(c)] < total[static_cast<size_t>(c)]);
        }
        const size_t rest = set.size() - idx.eval.size();
        CHECK(idx.train.size() == static_cast<size_t>(0.92 * static_cast<double>(rest)));
    }
}

TEST_CASE("apply_split is independent of the input ordering") {
    std::vector<std::array<int, 6>> counts(5, {0, 12, 9, 30, 8, 11});
    PatchSet set = metadata_patchset(counts);
    const SplitPlan plan = plan_split(set, 1, 2024);
    const SplitIndices a = apply_split(set, plan);

    // Same patches, reversed order.
    PatchSet reversed = set;
    std::reverse(reversed.patches.begin(), reversed.patches.end());
    const SplitIndices b = apply_split(reversed, plan);

    auto key = [](const Patch& p) {
        return std::tuple(p.subject_id, p.scene_id, p.row, p.col);
    };
    auto keys_of = [&](const PatchSet& s, const std::vector<size_t>& idx) {
        std::vector<std::tuple<int, int, int, int>> keys;
        for (size_t i : idx) keys.push_back(key(s.patches[i]));
        return keys;  // canonical shuffle order, no sort
    };
    CHECK(keys_of(set, a.train) == keys_of(reversed, b.train));
    CHECK(keys_of(set, a.validation) == keys_of(reversed, b.validation));
}

TEST_CASE("plan_split enforces its preconditions") {
    std::vector<std::array<int, 6>> counts(3, {0, 5, 5, 5, 5, 5});
    const PatchSet set = metadata_patchset(counts);
    CHECK_THROWS_AS(plan_split(set, 3, 0), ContractError);  // needs n_eval + 1 subjects
    CHECK_THROWS_AS(plan_split(PatchSet{}, 1, 0), ContractError);
}

TEST_CASE("split plans round-trip through their text form") {
    std::vector<std::array<int, 6>> counts(6, {0, 20, 20, 20, 20, 20});
    const PatchSet set = metadata_patchset(counts);
    const SplitPlan plan = plan_split(set, 2, 777);
    const auto path = std::filesystem::temp_directory_path() / "hsipipe_split_plan.txt";
    write_split_plan(plan, path);
    const SplitPlan back = read_split_plan(path);
    CHECK(back.eval_subjects == plan.eval_subjects);
    CHECK(back.seed == plan.seed);
    CHECK(back.train_fraction == plan.train_fraction);
    std::filesystem::remove(path);
}
