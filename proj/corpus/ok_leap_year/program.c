int main() {
  int y, r;
  scanf("%d", &y);
  r = 0;
  if (y % 4 == 0 && (y % 100 != 0 || y % 400 == 0))
    r = 1;
  printf("%d\n", r);
  return 0;
}
