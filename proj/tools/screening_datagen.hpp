#pragma once

#include <cstdint>
#include <filesystem>

namespace lmnet::datagen {

// Writes a synthetic adult screening CSV with the public UCI file's schema
// and statistical shape: ten 0/1 behavioral scores summing to `result`, ten
// personal attributes, a Class/ASD label that is YES exactly when result >= 7,
// an imbalanced class mix (~27% positive), and "?" cells in ethnicity,
// relation and age at the original file's rates. Deterministic in (rows, seed).
void write_screening_csv(const std::filesystem::path& path, std::int64_t rows, std::uint64_t seed);

}  // namespace lmnet::datagen
