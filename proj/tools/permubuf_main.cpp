#include "permubuf/cli.hpp"

int main(int argc, char** argv) {
    return permubuf::cli::run_main(argc, argv);
}
