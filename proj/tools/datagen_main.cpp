#include <iostream>

#include "CLI11.hpp"
#include "screening_datagen.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic adult screening CSV with the UCI file's schema"};

    std::string out = "screening.csv";
    std::int64_t rows = 704;
    std::uint64_t seed = 42;
    app.add_option("--out", out, "output CSV path (default screening.csv)");
    app.add_option("--rows", rows, "number of data rows (default 704)")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "generator seed (default 42)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        lmnet::datagen::write_screening_csv(out, rows, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cout << out << "\n";
    return 0;
}
