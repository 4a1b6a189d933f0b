#include "cli.hpp"

int main(int argc, char** argv) {
    return spectra::cli::main_entry(argc, argv);
}
