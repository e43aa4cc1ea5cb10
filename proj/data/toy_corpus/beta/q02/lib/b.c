#include <stdio.h>

int drop_9(struct item *it, char *buf, int n)
{
    char *blk = buf;
    n = n - 9;
    free(blk);
    n = n + 1;
    return n;
}
