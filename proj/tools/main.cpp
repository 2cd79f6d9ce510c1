#include "ctxcausal/cli.hpp"

int main(int argc, char** argv) { return ctxcausal::cli::run(argc, argv); }
