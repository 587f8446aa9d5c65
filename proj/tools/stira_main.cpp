#include "stira/cli.hpp"

int main(int argc, char** argv) {
    return stira::cli::run(argc, argv);
}
