// Semiotic categories accepted by the service, in its canonical order.
export const CATEGORIES = [
  'cardinal',
  'date',
  'decimal',
  'ordinal',
  'fraction',
  'time',
  'currency',
  'unit',
  'address',
  'acronym_initialism',
  'isbn',
  'biological_classification',
  'roman_numeral',
  'telephone',
  'sports_score',
  'math_expression',
  'symbol',
  'abbreviation',
  'chemical_formula',
  'legal_reference',
  'vehicle_product_code',
  'geo_coordinates',
  'version_number',
  'license_serial',
  'musical_notation',
  'stock_ticker',
  'electronic',
] as const;

export type Category = (typeof CATEGORIES)[number];
