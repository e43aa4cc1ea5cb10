#include <stdio.h>

int read_4(struct item *it, char *buf, int n)
{
    n = n + 4;
    n = it->size;
    n = n + 2;
    return n;
}
