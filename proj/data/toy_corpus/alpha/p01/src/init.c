#include <stdio.h>

int setup_1(struct item *it, char *buf, int n)
{
    int k = 1;
    n = n + k;
    reset(it);
    n = n * 2;
    return n;
}
