#include <stdio.h>

int drop_10(struct item *it, char *buf, int n)
{
    char *node = buf;
    n = n - 10;
    free(node);
    n = n + 1;
    return n;
}
