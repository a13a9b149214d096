from rest_framework import serializers


class DocumentRecordSerializer(serializers.Serializer):
	"""One line of a document JSON-lines file.

	Either `sentences` (pre-segmented) or `text` (newline-separated) must be present;
	unknown fields are ignored.
	"""

	id = serializers.CharField(trim_whitespace=True)
	lang = serializers.CharField(max_length=35, trim_whitespace=True)
	date = serializers.DateField(input_formats=["%Y-%m-%d"])
	url = serializers.CharField(required=False, allow_blank=True, allow_null=True, trim_whitespace=True)
	sentences = serializers.ListField(
		child=serializers.CharField(allow_blank=True, trim_whitespace=False),
		required=False,
	)
	text = serializers.CharField(required=False, allow_blank=True, trim_whitespace=False)

	def validate_id(self, value):
		# CharField coerces numbers; ids must arrive as strings.
		if not isinstance(self.initial_data.get("id"), str):
			raise serializers.ValidationError("must be a JSON string")
		return value

	def validate(self, attrs):
		if "sentences" not in attrs and "text" not in attrs:
			raise serializers.ValidationError("record needs either 'sentences' or 'text'")
		return attrs

	def sentence_texts(self) -> list[str]:
		"""Non-blank sentences, whitespace-trimmed, in document order."""
		data = self.validated_data
		if "sentences" in data:
			raw = data["sentences"]
		else:
			raw = data["text"].split("\n")
		return [s.strip() for s in raw if s.strip()]
