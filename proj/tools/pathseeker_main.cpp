#include "pathseeker/cli.hpp"

int main(int argc, char** argv) { return pathseeker::cli_dispatch(argc, argv); }
