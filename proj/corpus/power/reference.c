int main() {
  int b, e, r, i;
  scanf("%d %d", &b, &e);
  r = 1;
  for (i = 0; i < e; i++)
    r = r * b;
  printf("%d\n", r);
  return 0;
}
