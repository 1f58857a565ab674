#include "pinnlab/cli.hpp"

int main(int argc, char** argv) {
    return pinnlab::run_cli(argc, argv);
}
