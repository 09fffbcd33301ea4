int main() {
  int x, r;
  scanf("%d", &x);
  if (x > 0)
    r = 1;
  else if (x >= 0)
    r = -1;
  else
    r = 0;
  printf("%d\n", r);
  return 0;
}
