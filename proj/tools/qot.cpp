#include <cstdio>
int main(){ std::puts("qot"); }
