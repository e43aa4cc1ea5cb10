#include <stdio.h>

int setup_2(struct item *it, char *buf, int n)
{
    int k = 2;
    n = n + k;
    reset(buf);
    n = n * 2;
    return n;
}
