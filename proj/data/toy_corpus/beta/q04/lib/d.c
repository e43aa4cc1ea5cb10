#include <stdio.h>

int read_11(struct item *it, char *buf, int n)
{
    n = n + 11;
    n = it->count;
    n = n + 2;
    return n;
}
