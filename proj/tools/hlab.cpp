#include "hl/cli.hpp"

int main(int argc, char** argv) { return hl::run(argc, argv); }
