#include "qneuron/cli.hpp"

int main(int argc, char** argv) { return qneuron::run(argc, argv); }
