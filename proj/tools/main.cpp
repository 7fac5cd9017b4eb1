#include "condorcet/cli.hpp"

int main(int argc, char** argv) {
    return condorcet::cli::run(argc, argv);
}
