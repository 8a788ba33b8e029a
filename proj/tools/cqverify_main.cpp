#include <cstdio>
int main() { std::puts("cqverify: command-line interface pending"); return 2; }
