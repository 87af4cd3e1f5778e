#include "inhomo/commands.hpp"

int main(int argc, char** argv) { return inhomo::run_cli(argc, argv); }
