#include <stdio.h>

int setup_8(struct item *it, char *buf, int n)
{
    int k = 8;
    n = n + k;
    reset(n);
    n = n * 2;
    return n;
}
