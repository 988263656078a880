#include "screening_datagen.hpp"

#include <array>
#include <fstream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lmnet/common.hpp"

namespace lmnet::datagen {

namespace {

struct Weighted {
    const char* value;
    double weight;
};

const char* draw(std::mt19937_64& gen, std::span<const Weighted> choices) {
    double total = 0.0;
    for (const auto& c : choices) total += c.weight;
    double u = rng::uniform01(gen) * total;
    for (const auto& c : choices) {
        u -= c.weight;
        if (u < 0.0) return c.value;
    }
    return choices.back().value;
}

constexpr std::array<Weighted, 11> kEthnicities = {{{"White-European", 0.33},
                                                    {"Asian", 0.18},
                                                    {"Middle Eastern", 0.13},
                                                    {"Black", 0.07},
                                                    {"South Asian", 0.06},
                                                    {"Others", 0.08},
                                                    {"Latino", 0.05},
                                                    {"Hispanic", 0.04},
                                                    {"Pasifika", 0.03},
                                                    {"Turkish", 0.02},
                                                    {"White-African", 0.01}}};

constexpr std::array<Weighted, 14> kCountries = {{{"United States", 0.18},
                                                  {"United Kingdom", 0.15},
                                                  {"India", 0.12},
                                                  {"New Zealand", 0.09},
                                                  {"Australia", 0.07},
                                                  {"Canada", 0.06},
                                                  {"Jordan", 0.06},
                                                  {"United Arab Emirates", 0.05},
                                                  {"Brazil", 0.05},
                                                  {"France", 0.04},
                                                  {"Netherlands", 0.04},
                                                  {"Sri Lanka", 0.04},
                                                  {"Italy", 0.03},
                                                  {"Egypt", 0.02}}};

constexpr std::array<Weighted, 5> kRelations = {{{"Self", 0.74},
                                                 {"Parent", 0.11},
                                                 {"Relative", 0.06},
                                                 {"Health care professional", 0.05},
                                                 {"Others", 0.04}}};

// result | positive: mass on 7..10; result | negative: mass on 0..6
constexpr std::array<Weighted, 4> kPositiveResult = {{{"7", 0.38}, {"8", 0.30}, {"9", 0.20}, {"10", 0.12}}};
constexpr std::array<Weighted, 7> kNegativeResult = {
    {{"0", 0.07}, {"1", 0.12}, {"2", 0.16}, {"3", 0.18}, {"4", 0.18}, {"5", 0.16}, {"6", 0.13}}};

}  // namespace

void write_screening_csv(const std::filesystem::path& path, std::int64_t rows, std::uint64_t seed) {
    if (rows < 1) throw DataError("datagen: need at least one row");
    std::mt19937_64 gen(seed);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("datagen: cannot write '" + path.string() + "'");

    out << "A1_Score,A2_Score,A3_Score,A4_Score,A5_Score,A6_Score,A7_Score,A8_Score,A9_Score,A10_Score,"
           "age,gender,ethnicity,jundice,austim,country_of_res,used_app_before,result,age_desc,relation,"
           "Class/ASD\n";

    // Missing cells appear at roughly the public file's rates: ethnicity and
    // relation blank out together on ~13.5% of rows, age on a couple.
    std::vector<std::int64_t> order(rows);
    for (std::int64_t i = 0; i < rows; ++i) order[i] = i;
    rng::shuffle(order, gen);
    const std::int64_t n_demographic_missing = rows * 95 / 704;
    const std::int64_t n_age_missing = std::min<std::int64_t>(rows - n_demographic_missing, rows * 2 / 704);
    std::vector<bool> demographic_missing(rows, false), age_missing(rows, false);
    for (std::int64_t k = 0; k < n_demographic_missing; ++k) demographic_missing[order[k]] = true;
    for (std::int64_t k = 0; k < n_age_missing; ++k) age_missing[order[n_demographic_missing + k]] = true;

    std::vector<int> score_slots(10);
    for (std::int64_t i = 0; i < rows; ++i) {
        const bool positive = rng::uniform01(gen) < 0.27;
        const std::string result = draw(gen, positive ? std::span<const Weighted>(kPositiveResult)
                                                      : std::span<const Weighted>(kNegativeResult));
        const int result_value = std::stoi(result);

        // Distribute the total over the ten scores.
        for (int j = 0; j < 10; ++j) score_slots[j] = j;
        rng::shuffle(score_slots, gen);
        std::array<int, 10> scores{};
        for (int j = 0; j < result_value; ++j) scores[score_slots[j]] = 1;

        for (int j = 0; j < 10; ++j) out << scores[j] << ",";
        if (age_missing[i]) {
            out << "?,";
        } else {
            out << 17 + rng::below(gen, 48) << ",";
        }
        out << (rng::uniform01(gen) < 0.5 ? "f" : "m") << ",";
        out << (demographic_missing[i] ? "?" : draw(gen, kEthnicities)) << ",";
        out << (rng::uniform01(gen) < 0.10 ? "yes" : "no") << ",";
        out << (rng::uniform01(gen) < 0.13 ? "yes" : "no") << ",";
        out << draw(gen, kCountries) << ",";
        out << (rng::uniform01(gen) < 0.02 ? "yes" : "no") << ",";
        out << result << ",";
        out << "18 and more,";
        out << (demographic_missing[i] ? "?" : draw(gen, kRelations)) << ",";
        out << (result_value >= 7 ? "YES" : "NO") << "\n";
    }
    if (!out) throw DataError("datagen: write failed for '" + path.string() + "'");
}

}  // namespace lmnet::datagen
